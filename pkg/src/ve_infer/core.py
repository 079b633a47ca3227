"""Trial data model and the algebra linking infection rates, VE and theta.

VE is always a fraction here (0.95, not 95). Negative values are legal and
describe a vaccine arm with a higher infection rate than control.

``theta`` is the probability that a case, given that one occurred, came from
the vaccine arm::

    theta = s_v * lambda_v / (s_v * lambda_v + s_c * lambda_c)
          = s_v * (1 - ve) / (s_v * (1 - ve) + s_c)
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import DomainError


@dataclass(frozen=True)
class TrialData:
    """Observed statistics of one two-arm trial.

    Attributes
    ----------
    n_v, n_c : int
        Participants enrolled in the vaccine and control arms.
    s_v, s_c : float
        Surveillance time accumulated by each arm, in person-years.
    x_v, x_c : int
        Cases observed in each arm.
    d : float
        Enrollment (uniform accrual) duration in years.
    """

    n_v: int
    n_c: int
    s_v: float
    s_c: float
    x_v: int
    x_c: int
    d: float

    def __post_init__(self):
        problems = []
        for name in ("n_v", "n_c", "x_v", "x_c"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                problems.append(f"{name} must be an integer, got {value!r}")
        if problems:
            raise DomainError("; ".join(problems))
        object.__setattr__(self, "n_v", int(self.n_v))
        object.__setattr__(self, "n_c", int(self.n_c))
        object.__setattr__(self, "x_v", int(self.x_v))
        object.__setattr__(self, "x_c", int(self.x_c))
        for name in ("s_v", "s_c", "d"):
            object.__setattr__(self, name, float(getattr(self, name)))

        if self.n_v < 1:
            problems.append(f"n_v must be >= 1, got {self.n_v}")
        if self.n_c < 1:
            problems.append(f"n_c must be >= 1, got {self.n_c}")
        for name in ("s_v", "s_c", "d"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                problems.append(f"{name} must be a finite positive number, got {value!r}")
        if self.x_v < 0:
            problems.append(f"x_v must be >= 0, got {self.x_v}")
        if self.x_c < 0:
            problems.append(f"x_c must be >= 0, got {self.x_c}")
        if self.x_v > self.n_v:
            problems.append(f"x_v={self.x_v} exceeds n_v={self.n_v}")
        if self.x_c > self.n_c:
            problems.append(f"x_c={self.x_c} exceeds n_c={self.n_c}")
        if not problems:
            if self.s_v > self.n_v * self.d:
                problems.append(
                    f"s_v={self.s_v} exceeds n_v*d={self.n_v * self.d}: "
                    "no participant can contribute more than d person-years"
                )
            if self.s_c > self.n_c * self.d:
                problems.append(
                    f"s_c={self.s_c} exceeds n_c*d={self.n_c * self.d}: "
                    "no participant can contribute more than d person-years"
                )
        if problems:
            raise DomainError("invalid TrialData: " + "; ".join(problems))

    @property
    def total_cases(self) -> int:
        return self.x_v + self.x_c

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: dict) -> "TrialData":
        return cls(**{k: payload[k] for k in ("n_v", "n_c", "s_v", "s_c", "x_v", "x_c", "d")})


#: Interim efficacy analysis of the BNT162b2 trial. Arm sizes follow the
#: appendix data file (17411 vaccinated, 17511 control); the prose table in the
#: source lists them the other way round.
PFIZER_INTERIM = TrialData(n_v=17411, n_c=17511, s_v=2214.0, s_c=2222.0, x_v=8, x_c=162, d=0.29)

BUILTIN_DATASETS = {"pfizer-c4591001-interim": PFIZER_INTERIM}


@dataclass(frozen=True)
class RatePair:
    """Infection intensities (cases per person-year) of the two arms."""

    lambda_v: float
    lambda_c: float

    def __post_init__(self):
        if not self.lambda_v >= 0.0:
            raise DomainError(f"lambda_v must be >= 0, got {self.lambda_v!r}")
        if not self.lambda_c > 0.0:
            raise DomainError(f"lambda_c must be > 0, got {self.lambda_c!r}")


def ve_from_rates(rates: RatePair) -> float:
    """VE = 1 - lambda_v / lambda_c."""
    if not rates.lambda_c > 0.0:
        raise DomainError("lambda_c must be > 0: the incidence rate ratio is undefined")
    return 1.0 - rates.lambda_v / rates.lambda_c


def _check_times(s_v, s_c):
    if not (s_v > 0.0 and s_c > 0.0):
        raise DomainError(f"surveillance times must be > 0, got s_v={s_v!r}, s_c={s_c!r}")


def theta_from_ve(ve: float, s_v: float, s_c: float) -> float:
    """Map VE to the binomial case-split probability theta."""
    _check_times(s_v, s_c)
    if not ve <= 1.0:
        raise DomainError(f"ve must be <= 1, got {ve!r}")
    w = s_v * (1.0 - ve)
    return w / (w + s_c)


def ve_from_theta(theta: float, s_v: float, s_c: float) -> float:
    """Inverse of :func:`theta_from_ve`.

    ``theta == 1`` is rejected rather than clamped: VE diverges to minus
    infinity there and a clamp would silently corrupt interval endpoints.
    """
    _check_times(s_v, s_c)
    if not 0.0 <= theta < 1.0:
        raise DomainError(f"theta must satisfy 0 <= theta < 1, got {theta!r}")
    return 1.0 - (s_c / s_v) * theta / (1.0 - theta)
