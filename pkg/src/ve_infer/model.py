"""Full Bayesian model over the two infection rates.

Joint density of (lambda_v, lambda_c, data)::

    lambda_v ~ Gamma(a_v, b_v)            (rate parameterization)
    lambda_c ~ Gamma(a_c, b_c)
    s_v | lambda_v ~ Normal(n_v E[min(T,C)], n_v Var[min(T,C)])
    s_c | lambda_c ~ Normal(n_c E[min(T,C)], n_c Var[min(T,C)])
    x_v + x_c | s, lambda ~ Poisson(s_v lambda_v + s_c lambda_c)
    x_v | x_v + x_c, s, lambda ~ Binomial(x_v + x_c, theta)

The surveillance moments come from :mod:`ve_infer.moments`.
:class:`LikelihoodConfig` selects between the corrected second moment and
the published program's expression, and between each cohort's own size and
``n_v`` for both variance terms (the published program uses ``n_v`` twice).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import TrialData
from .errors import DomainError, NumericalError
from .moments import MomentMode, _mean_and_variance, _scaled_mean_and_variance
from .numerics import (
    binomial_logpmf,
    gamma_logpdf,
    log_binomial_coefficient,
    log_gamma,
    normal_logpdf,
    poisson_logpmf,
)

TERM_NAMES = ("prior_v", "prior_c", "surveillance_v", "surveillance_c", "total_cases", "case_split")


@dataclass(frozen=True)
class GammaPriorPair:
    """Independent Gamma(shape, rate) priors on lambda_v and lambda_c."""

    a_v: float
    b_v: float
    a_c: float
    b_c: float

    def __post_init__(self):
        bad = [n for n in ("a_v", "b_v", "a_c", "b_c") if not 0.0 < getattr(self, n) < math.inf]
        if bad:
            raise DomainError(f"Gamma hyperparameters must be finite and > 0: {', '.join(bad)}")

    def to_dict(self) -> dict:
        return {"a_v": self.a_v, "b_v": self.b_v, "a_c": self.a_c, "b_c": self.b_c}


#: Hyperparameters that make the full model mimic the trial's Beta(0.7, 1)
#: prior on theta (data-dependent rates b = s).
PFIZER_MIMIC_PRIORS = GammaPriorPair(a_v=0.7, b_v=2214.0, a_c=1.0, b_c=2222.0)
#: Default elicitation with prior VE guess 0.3 and a one-week mean time to infection.
DEFAULT_ELICITED_PRIORS = GammaPriorPair(a_v=1.0, b_v=0.01917808, a_c=2.428571, b_c=0.01917808)


class VarianceN(str, enum.Enum):
    PER_COHORT = "per-cohort"
    APPENDIX_NV = "appendix-nv"


@dataclass(frozen=True)
class LikelihoodConfig:
    moment_mode: MomentMode = MomentMode.CORRECTED
    variance_n: VarianceN = VarianceN.PER_COHORT

    def __post_init__(self):
        object.__setattr__(self, "moment_mode", MomentMode(self.moment_mode))
        object.__setattr__(self, "variance_n", VarianceN(self.variance_n))

    def to_dict(self) -> dict:
        return {"moment_mode": self.moment_mode.value, "variance_n": self.variance_n.value}


PAPER_LIKELIHOOD = LikelihoodConfig(MomentMode.PAPER_COMPAT, VarianceN.APPENDIX_NV)


def elicit_priors(ve_hat: float, lambda_c_hat: float) -> GammaPriorPair:
    """Default priors from a prior VE guess and a guessed control infection rate.

    ``a_v = 1`` (exponential prior on lambda_v), ``b_v = b_c = 1 / lambda_c_hat``
    and ``a_c = (2 - ve_hat) / (1 - ve_hat)``, which makes the prior mean of VE
    equal ``ve_hat``.
    """
    if not 0.0 <= ve_hat < 1.0:
        raise DomainError(f"ve_hat must satisfy 0 <= ve_hat < 1, got {ve_hat!r}")
    if not 0.0 < lambda_c_hat < math.inf:
        raise DomainError(f"lambda_c_hat must be finite and > 0, got {lambda_c_hat!r}")
    b = 1.0 / lambda_c_hat
    return GammaPriorPair(a_v=1.0, b_v=b, a_c=(2.0 - ve_hat) / (1.0 - ve_hat), b_c=b)


def prior_mean_ve(priors: GammaPriorPair) -> float:
    """E[VE] = 1 - E[lambda_v] E[1 / lambda_c] = 1 - (a_v / b_v) * b_c / (a_c - 1)."""
    if not priors.a_c > 1.0:
        raise DomainError(f"prior mean of VE does not exist: needs a_c > 1, got a_c={priors.a_c!r}")
    return 1.0 - (priors.a_v / priors.b_v) * (priors.b_c / (priors.a_c - 1.0))


# Term helpers. They never raise for positive rates: an impossible value
# (e.g. a negative paper-mode variance) shows up as -inf.


def log_prior_rate(lam, a: float, b: float):
    return gamma_logpdf(lam, a, b)


def log_surveillance_term(s: float, n_mean: int, n_var: int, lam, d: float, mode: MomentMode):
    with np.errstate(all="ignore"):
        unit_mean, unit_var = _mean_and_variance(lam, d, MomentMode(mode))
        mean = n_mean * unit_mean
        var = n_var * np.asarray(unit_var)
        ok = (var > 0.0) & np.isfinite(var)
        out = np.where(ok, normal_logpdf(s, mean, np.where(ok, var, 1.0)), -np.inf)
    return float(out) if out.ndim == 0 else out


def log_total_cases_term(data: TrialData, lambda_v, lambda_c):
    mean = data.s_v * np.asarray(lambda_v, dtype=float) + data.s_c * np.asarray(lambda_c, dtype=float)
    return poisson_logpmf(data.total_cases, mean)


def log_case_split_term(data: TrialData, lambda_v, lambda_c):
    wv = data.s_v * np.asarray(lambda_v, dtype=float)
    theta = wv / (wv + data.s_c * np.asarray(lambda_c, dtype=float))
    return binomial_logpmf(data.x_v, data.total_cases, theta)


def _check_rates(lambda_v, lambda_c):
    if np.any(~(np.asarray(lambda_v) > 0.0)) or np.any(~(np.asarray(lambda_c) > 0.0)):
        raise DomainError("log_posterior requires lambda_v > 0 and lambda_c > 0")


def log_posterior_terms(
    lambda_v,
    lambda_c,
    data: TrialData,
    priors: GammaPriorPair,
    cfg: LikelihoodConfig = LikelihoodConfig(),
) -> dict:
    """The six additive pieces of the unnormalized log posterior, by name."""
    _check_rates(lambda_v, lambda_c)
    n_var_v = data.n_v
    n_var_c = data.n_v if cfg.variance_n is VarianceN.APPENDIX_NV else data.n_c
    return {
        "prior_v": log_prior_rate(lambda_v, priors.a_v, priors.b_v),
        "prior_c": log_prior_rate(lambda_c, priors.a_c, priors.b_c),
        "surveillance_v": log_surveillance_term(data.s_v, data.n_v, n_var_v, lambda_v, data.d, cfg.moment_mode),
        "surveillance_c": log_surveillance_term(data.s_c, data.n_c, n_var_c, lambda_c, data.d, cfg.moment_mode),
        "total_cases": log_total_cases_term(data, lambda_v, lambda_c),
        "case_split": log_case_split_term(data, lambda_v, lambda_c),
    }


def log_posterior(
    lambda_v,
    lambda_c,
    data: TrialData,
    priors: GammaPriorPair,
    cfg: LikelihoodConfig = LikelihoodConfig(),
):
    """Unnormalized log posterior density of (lambda_v, lambda_c).

    Raises
    ------
    NumericalError
        If any term is not finite; the message names the term.
    """
    terms = log_posterior_terms(lambda_v, lambda_c, data, priors, cfg)
    total = 0.0
    for name in TERM_NAMES:
        value = terms[name]
        if not np.all(np.isfinite(value)):
            raise NumericalError(
                f"log posterior term {name!r} is not finite at "
                f"lambda_v={lambda_v!r}, lambda_c={lambda_c!r}"
            )
        total = total + value
    return total


def log_target(
    lambda_v,
    lambda_c,
    data: TrialData,
    priors: GammaPriorPair,
    cfg: LikelihoodConfig,
    include_likelihood: bool = True,
):
    """Log posterior with impossible points mapped to -inf (sampler use)."""
    if include_likelihood:
        terms = log_posterior_terms(lambda_v, lambda_c, data, priors, cfg)
        parts = [terms[n] for n in TERM_NAMES]
    else:
        parts = [log_prior_rate(lambda_v, priors.a_v, priors.b_v), log_prior_rate(lambda_c, priors.a_c, priors.b_c)]
    with np.errstate(invalid="ignore"):
        total = sum(np.asarray(p, dtype=float) for p in parts)
    return np.where(np.isnan(total), -np.inf, total)


def make_log_target(
    data: TrialData,
    priors: GammaPriorPair,
    cfg: LikelihoodConfig,
    include_likelihood: bool = True,
):
    """Fast vectorized equivalent of :func:`log_target` for the sampler.

    Constants are computed once, both arms' moments are evaluated in one
    call, and the Poisson total times the Binomial split is folded into the
    equivalent pair of independent Poisson terms. Arguments are not checked.
    """
    a_v, b_v, a_c, b_c = priors.a_v, priors.b_v, priors.a_c, priors.b_c
    prior_const = a_v * math.log(b_v) - log_gamma(a_v) + a_c * math.log(b_c) - log_gamma(a_c)
    k = data.total_cases
    lik_const = log_binomial_coefficient(k, data.x_v) - log_gamma(k + 1.0)
    if data.x_v > 0:
        lik_const += data.x_v * math.log(data.s_v)
    if data.x_c > 0:
        lik_const += data.x_c * math.log(data.s_c)
    n_var_c = data.n_v if cfg.variance_n is VarianceN.APPENDIX_NV else data.n_c
    d = data.d
    n_mean = np.array([[data.n_v], [data.n_c]], dtype=float)
    n_var = np.array([[data.n_v], [n_var_c]], dtype=float) * d * d
    s_obs = np.array([[data.s_v], [data.s_c]])
    mode = cfg.moment_mode
    half_log_2pi = 0.5 * math.log(2.0 * math.pi)

    def target(lambda_v, lambda_c):
        with np.errstate(all="ignore"):
            log_v = np.log(lambda_v)
            log_c = np.log(lambda_c)
            out = prior_const + (a_v - 1.0) * log_v - b_v * lambda_v + (a_c - 1.0) * log_c - b_c * lambda_c
            if not include_likelihood:
                return np.where(np.isnan(out), -np.inf, out)
            lam = np.stack([lambda_v, lambda_c])
            m1, v = _scaled_mean_and_variance(lam * d, mode)
            var = n_var * v
            z = s_obs - n_mean * d * m1
            surv = -half_log_2pi - 0.5 * np.log(var) - 0.5 * z * z / var
            surv = np.where(var > 0.0, surv, -np.inf).sum(axis=0)
            out = out + surv + lik_const - data.s_v * lambda_v - data.s_c * lambda_c
            if data.x_v > 0:
                out = out + data.x_v * log_v
            if data.x_c > 0:
                out = out + data.x_c * log_c
        return np.where(np.isnan(out), -np.inf, out)

    return target
