"""Posterior summaries and convergence diagnostics for VE draws.

ESS uses the multi-chain autocorrelation estimate with Geyer's initial
monotone sequence truncation; R-hat is the split-chain potential scale
reduction factor.  Both operate on split chains (each chain cut in half).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .mcmc import PosteriorChain

MIN_DRAWS = 1000


def _split(draws: np.ndarray) -> np.ndarray:
    n = draws.shape[1] // 2
    return np.concatenate([draws[:, :n], draws[:, -n:]], axis=0)


def _autocov(x: np.ndarray) -> np.ndarray:
    """Biased autocovariance of each row, all lags, via FFT."""
    n = x.shape[-1]
    centered = x - x.mean(axis=-1, keepdims=True)
    size = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(centered, n=size, axis=-1)
    acov = np.fft.irfft(f * np.conjugate(f), n=size, axis=-1)[..., :n]
    return acov / n


def split_rhat(draws) -> float:
    """Split-chain R-hat; ``nan`` when all within-chain variances vanish."""
    draws = np.atleast_2d(np.asarray(draws, dtype=float))
    sp = _split(draws)
    n = sp.shape[1]
    if n < 2:
        return float("nan")
    chain_means = sp.mean(axis=1)
    w = sp.var(axis=1, ddof=1).mean()
    b = n * chain_means.var(ddof=1)
    if w <= 0.0:
        return float("nan")
    var_plus = (n - 1) / n * w + b / n
    return float(np.sqrt(var_plus / w))


def effective_sample_size(draws) -> float:
    """ESS of the mean, capped at the number of draws; ``nan`` if degenerate."""
    draws = np.atleast_2d(np.asarray(draws, dtype=float))
    total = draws.size
    sp = _split(draws)
    m, n = sp.shape
    if n < 4:
        return float("nan")
    acov = _autocov(sp)
    chain_var = acov[:, 0] * n / (n - 1)
    w = chain_var.mean()
    var_plus = w * (n - 1) / n
    if m > 1:
        var_plus += sp.mean(axis=1).var(ddof=1)
    if var_plus <= 0.0:
        return float("nan")
    rho = 1.0 - (w - acov.mean(axis=0)) / var_plus
    rho[0] = 1.0
    # Geyer: sum adjacent pairs while positive, forcing the pair sums to decrease.
    tau = -1.0
    prev = np.inf
    for t in range(0, n - 1, 2):
        pair = rho[t] + rho[t + 1]
        if pair <= 0.0:
            break
        pair = min(pair, prev)
        tau += 2.0 * pair
        prev = pair
    ess = m * n / tau
    return float(min(ess, total))


@dataclass
class PosteriorSummary:
    mean_ve: float
    median_ve: float
    ci: tuple[float, float]
    level: float
    prob_ve_above: dict
    ess: float
    r_hat: float
    n_draws: int
    n_chains: int
    acceptance_rate: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "mean_ve": self.mean_ve,
            "median_ve": self.median_ve,
            "ci": {"level": self.level, "lo": self.ci[0], "hi": self.ci[1]},
            "prob_ve_above": {repr(float(k)): v for k, v in self.prob_ve_above.items()},
            "ess": self.ess,
            "r_hat": self.r_hat,
            "n_draws": self.n_draws,
            "n_chains": self.n_chains,
            "acceptance_rate": list(self.acceptance_rate),
            "warnings": list(self.warnings),
        }


def summarize_draws(ve, level: float = 0.95, thresholds=(), acceptance_rate=(), warnings=()) -> PosteriorSummary:
    """Summarize a ``(chains, draws)`` array of VE values."""
    ve = np.atleast_2d(np.asarray(ve, dtype=float))
    if ve.size == 0:
        raise DomainError("cannot summarize an empty chain")
    if ve.size < MIN_DRAWS:
        raise DomainError(f"need at least {MIN_DRAWS} retained draws, got {ve.size}")
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must lie in (0, 1), got {level!r}")
    warnings = list(warnings)
    pooled = ve.ravel()
    tail = 0.5 * (1.0 - level)
    lo, med, hi = np.quantile(pooled, [tail, 0.5, 1.0 - tail])

    r_hat = split_rhat(ve)
    ess = effective_sample_size(ve)
    if np.ptp(pooled) == 0.0:
        warnings.append("degenerate: all draws identical; r_hat and ess are placeholders")
        r_hat, ess = 1.0, float(pooled.size)
    else:
        if not np.isfinite(r_hat):
            warnings.append("r_hat undefined (zero within-chain variance); reported as 1")
            r_hat = 1.0
        if not np.isfinite(ess):
            warnings.append("ess undefined; reported as 0")
            ess = 0.0
    if ve.shape[0] < 2:
        warnings.append("single chain: r_hat computed from its two halves only")
    if r_hat >= 1.01:
        warnings.append(f"r_hat {r_hat:.4f} >= 1.01")

    return PosteriorSummary(
        mean_ve=float(pooled.mean()),
        median_ve=float(med),
        ci=(float(lo), float(hi)),
        level=level,
        prob_ve_above={float(t): float(np.mean(pooled > t)) for t in thresholds},
        ess=float(ess),
        r_hat=float(r_hat),
        n_draws=int(pooled.size),
        n_chains=int(ve.shape[0]),
        acceptance_rate=[float(a) for a in acceptance_rate],
        warnings=warnings,
    )


def summarize_chain(chain: PosteriorChain, level: float = 0.95, thresholds=()) -> PosteriorSummary:
    return summarize_draws(
        chain.ve,
        level=level,
        thresholds=thresholds,
        acceptance_rate=chain.acceptance_rate,
        warnings=chain.warnings,
    )
