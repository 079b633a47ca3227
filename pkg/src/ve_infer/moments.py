"""Moments of one participant's follow-up time min(T, C).

T ~ Exponential(lam) is the potential infection time and C ~ Uniform(0, d)
the administrative censoring time left after uniform recruitment over
``[0, d]``.  With ``x = lam * d``::

    E[min(T, C)]   = d * (x - 1 + exp(-x)) / x**2
    E[min(T, C)^2] = d**2 * (2 + 2 exp(-x) - 4 (1 - exp(-x)) / x) / x**2

Both closed forms cancel catastrophically for small ``x``; below
``_SERIES_CUTOFF`` they are evaluated from their Taylor series instead.

Two variants of the second moment exist. ``MomentMode.CORRECTED`` is the
integral above. ``MomentMode.PAPER_COMPAT`` reproduces the expression
``(2 exp(-x) + 4 exp(-x) / x) / lam**2`` used by the published analysis
program. It is kept only to reproduce those numbers: it does not tend to
``2 / lam**2`` as ``d`` grows and it becomes negative once ``x`` exceeds
about 2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError

_SERIES_CUTOFF = 0.5
_SERIES_TERMS = 24


class MomentMode(str, enum.Enum):
    PAPER_COMPAT = "paper"
    CORRECTED = "corrected"


# m1(x) = sum_n (-x)^n / (n+2)!,  m2(x) = sum_n (-x)^n * 2(n+1) / (n+3)!
_M1_COEF = np.array([1.0 / math.factorial(n + 2) for n in range(_SERIES_TERMS)])
_M2_COEF = np.array([2.0 * (n + 1) / math.factorial(n + 3) for n in range(_SERIES_TERMS)])
_POWERS = np.arange(_SERIES_TERMS)
# Largest x for which the first k terms already reach double precision.
_TERMS_REACH = [(3e-18 * math.factorial(k + 2)) ** (1.0 / k) for k in range(1, _SERIES_TERMS)]


def _series(x, coefs):
    xmax = float(np.max(x)) if np.size(x) else 0.0
    k = next((k for k, reach in enumerate(_TERMS_REACH, start=1) if reach >= xmax), _SERIES_TERMS)
    return np.power.outer(-x, _POWERS[:k]) @ coefs[:k]


def _m1(x):
    """E[min(T,C)] / d as a function of x = lam*d."""
    small = x < _SERIES_CUTOFF
    if np.all(small):
        return _series(x, _M1_COEF)
    xs = np.where(small, _SERIES_CUTOFF, x)
    closed = (xs + np.expm1(-xs)) / (xs * xs)
    if not np.any(small):
        return closed
    return np.where(small, _series(np.where(small, x, 0.0), _M1_COEF), closed)


def _m2(x):
    """Corrected E[min(T,C)^2] / d^2 as a function of x."""
    small = x < _SERIES_CUTOFF
    if np.all(small):
        return _series(x, _M2_COEF)
    xs = np.where(small, _SERIES_CUTOFF, x)
    closed = (2.0 + 2.0 * np.exp(-xs) + 4.0 * np.expm1(-xs) / xs) / (xs * xs)
    if not np.any(small):
        return closed
    return np.where(small, _series(np.where(small, x, 0.0), _M2_COEF), closed)


def _unwrap(v):
    return float(v) if np.ndim(v) == 0 else v


def _check_d(d):
    if not (d > 0.0 and math.isfinite(d)):
        raise DomainError(f"duration d must be finite and > 0, got {d!r}")


def surveillance_mean(lam, d: float):
    """Expected follow-up per participant, E[min(T, C)] in years.

    ``lam = 0`` is allowed and gives the censoring-only limit ``d / 2``.
    """
    _check_d(d)
    lam = np.asarray(lam, dtype=float)
    if np.any(~(lam >= 0.0)):
        raise DomainError("rate lambda must be >= 0")
    return _unwrap(d * _m1(lam * d))


def surveillance_second_moment(lam, d: float, mode: MomentMode = MomentMode.CORRECTED):
    """E[min(T, C)^2] in years squared."""
    _check_d(d)
    mode = MomentMode(mode)
    lam = np.asarray(lam, dtype=float)
    if np.any(~(lam > 0.0)):
        raise DomainError("rate lambda must be > 0")
    x = lam * d
    if mode is MomentMode.CORRECTED:
        return _unwrap(d * d * _m2(x))
    e = np.exp(-x)
    return _unwrap((2.0 * e + 4.0 * e / x) / (lam * lam))


def _scaled_mean_and_variance(x, mode: MomentMode):
    """E[min(T,C)] / d and Var[min(T,C)] / d**2 at x = lam*d, unchecked."""
    m1 = _m1(x)
    if mode is MomentMode.CORRECTED:
        # Subtracting the scaled moments keeps the difference O(1).
        return m1, _m2(x) - m1 * m1
    e = np.exp(-x)
    return m1, (2.0 * e + 4.0 * e / x) / (x * x) - m1 * m1


def _mean_and_variance(lam, d: float, mode: MomentMode):
    _check_d(d)
    lam = np.asarray(lam, dtype=float)
    if np.any(~(lam > 0.0)):
        raise DomainError("rate lambda must be > 0")
    m1, v = _scaled_mean_and_variance(lam * d, mode)
    var = d * d * v
    if mode is MomentMode.CORRECTED and np.any(~(var > 0.0)):
        raise NumericalError(f"corrected variance not positive for lambda={lam!r}, d={d!r}")
    return d * m1, var


def surveillance_variance(lam, d: float, mode: MomentMode = MomentMode.CORRECTED):
    """Var[min(T, C)] = second moment - mean**2.

    In corrected mode the result is always positive; a nonpositive value there
    means a numerical defect and raises :class:`NumericalError`.  In paper
    mode the value can legitimately be negative and is returned as is.
    """
    return _unwrap(_mean_and_variance(lam, d, MomentMode(mode))[1])


@dataclass(frozen=True)
class SurveillanceMoments:
    mean: float
    variance: float
    mode: MomentMode


def surveillance_moments(lam: float, d: float, mode: MomentMode = MomentMode.CORRECTED) -> SurveillanceMoments:
    mode = MomentMode(mode)
    return SurveillanceMoments(surveillance_mean(lam, d), surveillance_variance(lam, d, mode), mode)


def cohort_normal_params(n: int, lam, d: float, mode: MomentMode = MomentMode.CORRECTED):
    """Mean and variance of the total surveillance time of ``n`` i.i.d. participants."""
    if n < 1:
        raise DomainError(f"cohort size n must be >= 1, got {n!r}")
    mean, var = _mean_and_variance(lam, d, MomentMode(mode))
    return _unwrap(n * mean), _unwrap(n * var)
