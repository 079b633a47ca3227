"""Exact method conditional on the total number of cases.

Surveillance times and the total case count are treated as fixed. The only
likelihood left is the binomial split of cases between arms, with success
probability theta (see :mod:`ve_infer.core`), and a conjugate Beta prior on
theta gives a closed-form posterior. VE summaries follow by pushing theta
through the decreasing map ``ve_from_theta``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import TrialData, theta_from_ve, ve_from_theta
from .errors import DomainError
from .numerics import QuantileSolverConfig, beta_logpdf, inv_reg_inc_beta, reg_inc_beta


@dataclass(frozen=True)
class BetaDistributionParams:
    a: float
    b: float

    def __post_init__(self):
        for name in ("a", "b"):
            v = getattr(self, name)
            if not (0.0 < v < float("inf")):
                raise DomainError(f"Beta shape {name} must be finite and > 0, got {v!r}")

    def logpdf(self, theta):
        return beta_logpdf(theta, self.a, self.b)

    def cdf(self, theta: float) -> float:
        return reg_inc_beta(theta, self.a, self.b)

    def ppf(self, p: float, cfg: QuantileSolverConfig | None = None) -> float:
        return inv_reg_inc_beta(p, self.a, self.b, cfg)


#: Prior on theta used by the BNT162b2 trial protocol.
PFIZER_BETA_PRIOR = BetaDistributionParams(0.700102, 1.0)


def posterior_theta(prior: BetaDistributionParams, x_v: int, x_c: int) -> BetaDistributionParams:
    """Conjugate update: Beta(a, b) -> Beta(a + x_v, b + x_c)."""
    if x_v < 0 or x_c < 0:
        raise DomainError(f"case counts must be >= 0, got x_v={x_v!r}, x_c={x_c!r}")
    return BetaDistributionParams(prior.a + x_v, prior.b + x_c)


def ve_credible_interval(
    posterior: BetaDistributionParams,
    s_v: float,
    s_c: float,
    level: float = 0.95,
    cfg: QuantileSolverConfig | None = None,
) -> tuple[float, float]:
    """Equal-tail credible interval for VE.

    VE decreases in theta, so the upper theta quantile maps to the lower VE
    bound.
    """
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must lie in (0, 1), got {level!r}")
    tail = 0.5 * (1.0 - level)
    theta_lo = posterior.ppf(tail, cfg)
    theta_hi = posterior.ppf(1.0 - tail, cfg)
    return ve_from_theta(theta_hi, s_v, s_c), ve_from_theta(theta_lo, s_v, s_c)


def posterior_median_ve(posterior: BetaDistributionParams, s_v: float, s_c: float) -> float:
    return ve_from_theta(posterior.ppf(0.5), s_v, s_c)


def posterior_mean_ve(posterior: BetaDistributionParams, s_v: float, s_c: float) -> float:
    """Exact posterior mean of VE, using E[theta / (1 - theta)] = a / (b - 1)."""
    if not posterior.b > 1.0:
        raise DomainError(
            f"posterior mean of VE undefined: needs Beta shape b > 1, got b={posterior.b!r}"
        )
    if not (s_v > 0.0 and s_c > 0.0):
        raise DomainError("surveillance times must be > 0")
    return 1.0 - (s_c / s_v) * posterior.a / (posterior.b - 1.0)


def posterior_prob_ve_above(
    threshold: float, posterior: BetaDistributionParams, s_v: float, s_c: float
) -> float:
    """P(VE > threshold | data) = I_t(a, b) at t = theta_from_ve(threshold)."""
    if not threshold < 1.0:
        raise DomainError(f"threshold must be < 1, got {threshold!r}")
    return posterior.cdf(theta_from_ve(threshold, s_v, s_c))


def irr_point_estimate(data: TrialData) -> float:
    """Plug-in VE from crude rates x/s in each arm."""
    if data.x_c == 0:
        raise DomainError("x_c = 0: the crude control rate is zero and VE is undefined")
    return 1.0 - (data.x_v / data.s_v) / (data.x_c / data.s_c)


@dataclass(frozen=True)
class ConditionalSummary:
    prior: BetaDistributionParams
    posterior: BetaDistributionParams
    mean_ve: float | None
    median_ve: float
    ci: tuple[float, float]
    level: float
    prob_ve_above: dict
    irr_point_estimate: float | None

    def to_dict(self) -> dict:
        return {
            "prior": {"a": self.prior.a, "b": self.prior.b},
            "posterior": {"a": self.posterior.a, "b": self.posterior.b},
            "mean_ve": self.mean_ve,
            "median_ve": self.median_ve,
            "ci": {"level": self.level, "lo": self.ci[0], "hi": self.ci[1]},
            "prob_ve_above": {_threshold_key(k): v for k, v in self.prob_ve_above.items()},
            "irr_point_estimate": self.irr_point_estimate,
        }


def _threshold_key(t: float) -> str:
    return repr(float(t))


def analyze_conditional(
    data: TrialData,
    prior: BetaDistributionParams = PFIZER_BETA_PRIOR,
    level: float = 0.95,
    thresholds=(0.3,),
) -> ConditionalSummary:
    """Run the whole conditional analysis on one trial."""
    post = posterior_theta(prior, data.x_v, data.x_c)
    mean = posterior_mean_ve(post, data.s_v, data.s_c) if post.b > 1.0 else None
    irr = irr_point_estimate(data) if data.x_c > 0 else None
    return ConditionalSummary(
        prior=prior,
        posterior=post,
        mean_ve=mean,
        median_ve=posterior_median_ve(post, data.s_v, data.s_c),
        ci=ve_credible_interval(post, data.s_v, data.s_c, level),
        level=level,
        prob_ve_above={float(t): posterior_prob_ve_above(t, post, data.s_v, data.s_c) for t in thresholds},
        irr_point_estimate=irr,
    )
