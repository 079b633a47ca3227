"""Re-run the published BNT162b2 interim analysis and compare with its numbers.

Three analyses on the built-in interim dataset:

1. conditional Beta-binomial with the trial's Beta(0.700102, 1) prior;
2. full model, Gamma priors chosen to mimic that Beta prior;
3. full model, default elicited priors (prior VE 0.3, one-week infection time).

Both full-model runs use the published program's likelihood (paper-mode
second moment, ``n_v`` in both variance terms).
"""

from __future__ import annotations

from dataclasses import dataclass

from .conditional import PFIZER_BETA_PRIOR, analyze_conditional
from .core import PFIZER_INTERIM
from .diagnostics import summarize_chain
from .mcmc import McmcConfig, sample_posterior
from .model import DEFAULT_ELICITED_PRIORS, PAPER_LIKELIHOOD, PFIZER_MIMIC_PRIORS

# (label, published value in percent, tolerance in percentage points)
PUBLISHED = {
    "conditional_ci_lo": (90.3, 0.2),
    "conditional_ci_hi": (97.6, 0.2),
    "irr_point_estimate": (95.0, 0.1),
    "mimic_mean": (93.7, 0.5),
    "mimic_ci_lo": (89.0, 1.0),
    "mimic_ci_hi": (97.0, 1.0),
    "default_mean": (93.6, 0.5),
    "default_ci_lo": (89.0, 1.0),
    "default_ci_hi": (97.0, 1.0),
}


@dataclass(frozen=True)
class ComparisonRow:
    name: str
    published: float
    observed: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return abs(self.observed - self.published) <= self.tolerance


@dataclass
class Reproduction:
    conditional: object
    mimic: object
    default: object
    rows: list

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def table(self) -> str:
        lines = [f"{'quantity':<22}{'published':>10}{'observed':>10}{'tol':>7}  status"]
        for r in self.rows:
            status = "ok" if r.ok else "FAIL"
            lines.append(f"{r.name:<22}{r.published:>10.1f}{r.observed:>10.1f}{r.tolerance:>7.1f}  {status}")
        return "\n".join(lines)


def run_reproduction(mcmc: McmcConfig = McmcConfig(), level: float = 0.95) -> Reproduction:
    data = PFIZER_INTERIM
    cond = analyze_conditional(data, PFIZER_BETA_PRIOR, level, thresholds=(0.3,))
    mimic = summarize_chain(sample_posterior(data, PFIZER_MIMIC_PRIORS, mcmc, PAPER_LIKELIHOOD), level, (0.3,))
    default = summarize_chain(sample_posterior(data, DEFAULT_ELICITED_PRIORS, mcmc, PAPER_LIKELIHOOD), level, (0.3,))
    observed = {
        "conditional_ci_lo": cond.ci[0],
        "conditional_ci_hi": cond.ci[1],
        "irr_point_estimate": cond.irr_point_estimate,
        "mimic_mean": mimic.mean_ve,
        "mimic_ci_lo": mimic.ci[0],
        "mimic_ci_hi": mimic.ci[1],
        "default_mean": default.mean_ve,
        "default_ci_lo": default.ci[0],
        "default_ci_hi": default.ci[1],
    }
    rows = [ComparisonRow(name, pub, 100.0 * observed[name], tol) for name, (pub, tol) in PUBLISHED.items()]
    return Reproduction(conditional=cond, mimic=mimic, default=default, rows=rows)
