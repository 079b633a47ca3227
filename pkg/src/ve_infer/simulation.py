"""Participant-level trial simulator.

Each participant is recruited at U ~ Uniform(0, d), has a potential
infection time T ~ Exponential(lam) measured from recruitment, and is
followed until infection or the end of the study, whichever comes first.
The simulator is also the Monte Carlo oracle for the follow-up moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .core import RatePair, TrialData
from .errors import DomainError

_CHUNK = 1_000_000


@dataclass(frozen=True)
class ParticipantOutcome:
    """Per-participant arrays for one simulated cohort."""

    recruit_time: np.ndarray
    event_time: np.ndarray
    followup: np.ndarray
    infected: np.ndarray


def _check(n, lam, d):
    if int(n) != n or n < 1:
        raise DomainError(f"cohort size n must be a positive integer, got {n!r}")
    if not lam >= 0.0 or math.isinf(lam):
        raise DomainError(f"rate lambda must be finite and >= 0, got {lam!r}")
    if not (d > 0.0 and math.isfinite(d)):
        raise DomainError(f"duration d must be finite and > 0, got {d!r}")


def _draw_followup(n: int, lam: float, d: float, gen: np.random.Generator):
    recruit = gen.uniform(0.0, d, size=n)
    if lam > 0.0:
        event = gen.exponential(1.0 / lam, size=n)
    else:
        event = np.full(n, np.inf)
    censor = d - recruit
    return recruit, event, np.minimum(event, censor), event < censor


def simulate_participants(n: int, lam: float, d: float, gen: np.random.Generator) -> ParticipantOutcome:
    _check(n, lam, d)
    return ParticipantOutcome(*_draw_followup(int(n), lam, d, gen))


def simulate_cohort(n: int, lam: float, d: float, gen: np.random.Generator) -> tuple[float, int]:
    """Total surveillance time and case count of one cohort."""
    _check(n, lam, d)
    n = int(n)
    s = 0.0
    x = 0
    for start in range(0, n, _CHUNK):
        _, _, followup, infected = _draw_followup(min(_CHUNK, n - start), lam, d, gen)
        s += math.fsum(followup)
        x += int(infected.sum())
    return s, x


def simulate_trial(n_v: int, n_c: int, rates: RatePair, d: float, seed: int) -> TrialData:
    """Simulate both arms from disjoint random streams of ``seed``."""
    s_v, x_v = simulate_cohort(n_v, rates.lambda_v, d, rng.stream(seed, rng.SIMULATION, 0))
    s_c, x_c = simulate_cohort(n_c, rates.lambda_c, d, rng.stream(seed, rng.SIMULATION, 1))
    return TrialData(n_v=n_v, n_c=n_c, s_v=s_v, s_c=s_c, x_v=x_v, x_c=x_c, d=d)


@dataclass(frozen=True)
class MomentEstimate:
    mean: float
    variance: float
    se_mean: float
    se_var: float
    replicates: int


def mc_moments(replicates: int, lam: float, d: float, seed: int, stream_index: int = 0) -> MomentEstimate:
    """Monte Carlo mean and variance of min(T, C) with standard errors.

    The variance standard error is the asymptotic one,
    ``sqrt((mu4 - sigma**4) / n)``, with the empirical fourth central moment.
    ``stream_index`` selects an independent stream under the same seed.
    """
    if replicates < 10_000:
        raise DomainError(f"mc_moments needs at least 1e4 replicates, got {replicates}")
    _check(replicates, lam, d)
    gen = rng.stream(seed, rng.MONTE_CARLO, 100 + stream_index)
    shift = None
    sums = np.zeros(4)
    for start in range(0, replicates, _CHUNK):
        _, _, y, _ = _draw_followup(min(_CHUNK, replicates - start), lam, d, gen)
        if shift is None:
            shift = float(y.mean())
        z = y - shift
        z2 = z * z
        sums += (z.sum(), z2.sum(), (z2 * z).sum(), (z2 * z2).sum())
    n = replicates
    m1, r2, r3, r4 = sums / n
    var_b = r2 - m1 * m1
    mu4 = r4 - 4.0 * m1 * r3 + 6.0 * m1 * m1 * r2 - 3.0 * m1**4
    variance = var_b * n / (n - 1)
    return MomentEstimate(
        mean=shift + m1,
        variance=variance,
        se_mean=math.sqrt(variance / n),
        se_var=math.sqrt(max(mu4 - var_b * var_b, 0.0) / n),
        replicates=n,
    )
