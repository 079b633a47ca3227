"""Bayesian estimation of vaccine efficacy from two-arm trial counts.

Two estimators are provided: the conditional Beta-binomial method on the
share of cases in the vaccine arm, and a full model over both infection
rates sampled by adaptive Metropolis. Simulation and quadrature oracles
check the closed-form pieces.
"""

import sys

from ._version import __version__
from .conditional import (
    PFIZER_BETA_PRIOR,
    BetaDistributionParams,
    ConditionalSummary,
    analyze_conditional,
    irr_point_estimate,
    posterior_mean_ve,
    posterior_median_ve,
    posterior_prob_ve_above,
    posterior_theta,
    ve_credible_interval,
)
from .core import BUILTIN_DATASETS, PFIZER_INTERIM, RatePair, TrialData, theta_from_ve, ve_from_rates, ve_from_theta
from .diagnostics import PosteriorSummary, effective_sample_size, split_rhat, summarize_chain, summarize_draws
from .errors import DomainError, NumericalError
from .mcmc import McmcConfig, PosteriorChain, sample_posterior
from .model import (
    DEFAULT_ELICITED_PRIORS,
    PAPER_LIKELIHOOD,
    PFIZER_MIMIC_PRIORS,
    GammaPriorPair,
    LikelihoodConfig,
    VarianceN,
    elicit_priors,
    log_posterior,
    log_posterior_terms,
    prior_mean_ve,
)
from .moments import MomentMode, SurveillanceMoments, surveillance_moments
from .numerics import QuantileSolverConfig, inv_reg_inc_beta, log_beta, log_gamma, reg_inc_beta
from .simulation import mc_moments, simulate_cohort, simulate_trial

__all__ = sorted(
    name for name, obj in globals().items() if not name.startswith("_") and not isinstance(obj, type(sys))
) + ["__version__"]
