"""Adaptive random-walk Metropolis for the two-rate posterior.

The walk runs on (log lambda_v, log lambda_c), so the target gains the
Jacobian ``log lambda_v + log lambda_c``.  During burn-in each chain adapts a
diagonal Gaussian proposal: the per-coordinate shape follows the running
standard deviation of its own draws and a global log-scale is moved by a
Robbins-Monro step toward ``target_acceptance``.  Both are frozen once
burn-in ends, so retained draws come from a fixed Metropolis kernel.

Chains are advanced together as numpy vectors, but each one reads only its
own pre-drawn random numbers from ``rng.stream(seed, MCMC, chain)``; a chain's
draws are therefore identical whether it runs alone or with others.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .core import TrialData
from .errors import DomainError, NumericalError
from .model import GammaPriorPair, LikelihoodConfig, log_posterior, make_log_target


@dataclass(frozen=True)
class McmcConfig:
    chains: int = 4
    iterations: int = 50_000
    burn_in: int = 10_000
    seed: int = 20201118
    target_acceptance: float = 0.35
    initial_step: float = 0.1

    def __post_init__(self):
        if self.chains < 1:
            raise DomainError(f"chains must be >= 1, got {self.chains}")
        if not 0 <= self.burn_in < self.iterations:
            raise DomainError(
                f"burn_in must satisfy 0 <= burn_in < iterations, got burn_in={self.burn_in}, "
                f"iterations={self.iterations}"
            )
        if not 0.1 < self.target_acceptance < 0.6:
            raise DomainError(f"target_acceptance must lie in (0.1, 0.6), got {self.target_acceptance}")
        if not self.initial_step > 0.0:
            raise DomainError(f"initial_step must be > 0, got {self.initial_step}")
        rng.check_seed(self.seed)

    def to_dict(self) -> dict:
        return {
            "chains": self.chains,
            "iterations": self.iterations,
            "burn_in": self.burn_in,
            "seed": self.seed,
            "target_acceptance": self.target_acceptance,
            "initial_step": self.initial_step,
        }


CSV_COLUMNS = ("chain", "iter", "lambda_v", "lambda_c", "ve", "log_post")


@dataclass
class PosteriorChain:
    """Retained draws, shape ``(chains, draws)`` for each array."""

    lambda_v: np.ndarray
    lambda_c: np.ndarray
    log_post: np.ndarray
    acceptance_rate: np.ndarray
    burn_in: int = 0
    proposal_sd: np.ndarray | None = None
    warnings: list = field(default_factory=list)

    @property
    def ve(self) -> np.ndarray:
        return 1.0 - self.lambda_v / self.lambda_c

    @property
    def n_chains(self) -> int:
        return self.lambda_v.shape[0]

    @property
    def n_draws(self) -> int:
        return self.lambda_v.shape[1]

    def to_csv(self, path=None) -> str:
        """Serialize draws as CSV (full-precision ``repr`` floats).

        Returns the text; also writes it atomically to ``path`` when given.
        """
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        ve = self.ve
        for k in range(self.n_chains):
            lv, lc, v, lp = self.lambda_v[k], self.lambda_c[k], ve[k], self.log_post[k]
            for i in range(self.n_draws):
                w.writerow((k, self.burn_in + i, repr(float(lv[i])), repr(float(lc[i])),
                            repr(float(v[i])), repr(float(lp[i]))))
        text = buf.getvalue()
        if path is not None:
            atomic_write_text(path, text)
        return text


def atomic_write_text(path, text: str) -> None:
    path = os.fspath(path)
    tmp = f"{path}.tmp-{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def initial_rates(data: TrialData) -> tuple[float, float]:
    """Continuity-corrected crude rates, finite even with zero cases."""
    return (data.x_v + 0.5) / data.s_v, (data.x_c + 0.5) / data.s_c


def sample_posterior(
    data: TrialData,
    priors: GammaPriorPair,
    cfg: McmcConfig = McmcConfig(),
    lik: LikelihoodConfig = LikelihoodConfig(),
    include_likelihood: bool = True,
) -> PosteriorChain:
    """Draw from the posterior of (lambda_v, lambda_c).

    ``include_likelihood=False`` samples the prior alone; it exists to test
    the sampler and its Jacobian against known Gamma moments.
    """
    lv0, lc0 = initial_rates(data)
    if include_likelihood:
        # Raises NumericalError naming the offending term.
        log_posterior(lv0, lc0, data, priors, lik)

    log_density = make_log_target(data, priors, lik, include_likelihood)

    def target(theta):
        lp = log_density(np.exp(theta[:, 0]), np.exp(theta[:, 1]))
        return lp, lp + theta[:, 0] + theta[:, 1]

    k_chains, n_iter, n_burn = cfg.chains, cfg.iterations, cfg.burn_in
    streams = [rng.stream(cfg.seed, rng.MCMC, k) for k in range(k_chains)]
    noise = np.stack([s.standard_normal((n_iter, 2)) for s in streams], axis=1)
    log_u = np.stack([np.log(s.random(n_iter)) for s in streams], axis=1)

    theta = np.tile([math.log(lv0), math.log(lc0)], (k_chains, 1))
    lp, lt = target(theta)
    if not np.all(np.isfinite(lt)):
        raise NumericalError("log posterior is not finite at the initial rates")

    warm = min(1000, n_burn // 4)
    welford_start = warm // 2
    log_scale = np.zeros(k_chains)
    shape = np.full((k_chains, 2), cfg.initial_step)
    w_n = 0
    w_mean = np.zeros((k_chains, 2))
    w_m2 = np.zeros((k_chains, 2))

    n_keep = n_iter - n_burn
    keep_theta = np.empty((n_keep, k_chains, 2))
    keep_lp = np.empty((n_keep, k_chains))
    accepted = np.zeros(k_chains)
    step = shape * np.exp(log_scale)[:, None]

    for t in range(n_iter):
        adapting = t < n_burn
        if adapting:
            step = shape * np.exp(log_scale)[:, None]
        proposal = theta + step * noise[t]
        lp_new, lt_new = target(proposal)
        with np.errstate(invalid="ignore"):
            log_ratio = lt_new - lt
        log_ratio = np.where(np.isnan(log_ratio), -np.inf, log_ratio)
        accept = log_u[t] < log_ratio
        theta = np.where(accept[:, None], proposal, theta)
        lp = np.where(accept, lp_new, lp)
        lt = np.where(accept, lt_new, lt)
        if adapting:
            prob = np.exp(np.minimum(log_ratio, 0.0))
            log_scale += (prob - cfg.target_acceptance) / (t + 1) ** 0.6
            if t >= welford_start:
                w_n += 1
                delta = theta - w_mean
                w_mean += delta / w_n
                w_m2 += delta * (theta - w_mean)
            if t + 1 == warm and w_n > 1:
                shape = np.sqrt(w_m2 / (w_n - 1)) + 1e-12
                # Restart the scale at the 2-D random-walk optimum for the new shape.
                log_scale[:] = math.log(2.38 / math.sqrt(2.0))
            elif t + 1 > warm and w_n > 1:
                shape = np.sqrt(w_m2 / (w_n - 1)) + 1e-12
        else:
            accepted += accept
            keep_theta[t - n_burn] = theta
            keep_lp[t - n_burn] = lp

    rate = accepted / n_keep
    warnings = [
        f"chain {k}: post-burn-in acceptance {rate[k]:.3f} outside [0.05, 0.95]"
        for k in range(k_chains)
        if not 0.05 <= rate[k] <= 0.95
    ]
    return PosteriorChain(
        lambda_v=np.exp(keep_theta[:, :, 0].T).copy(),
        lambda_c=np.exp(keep_theta[:, :, 1].T).copy(),
        log_post=keep_lp.T.copy(),
        acceptance_rate=rate,
        burn_in=n_burn,
        proposal_sd=step.copy(),
        warnings=warnings,
    )
