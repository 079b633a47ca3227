import numpy as np
import pytest

from ve_infer import (
    DEFAULT_ELICITED_PRIORS,
    PAPER_LIKELIHOOD,
    PFIZER_INTERIM,
    PFIZER_MIMIC_PRIORS,
    DomainError,
    GammaPriorPair,
    MomentMode,
)
from ve_infer.moments import surveillance_second_moment
from ve_infer.numerics import reg_inc_beta
from ve_infer.oracles import (
    beta_representation_check,
    gamma_ratio_samples,
    grid_posterior_ve,
    ks_distance,
    quadrature_moment_oracle,
)


def test_quadrature_second_moment():
    d = 0.29
    assert quadrature_moment_oracle(1e-7, d, 2) == pytest.approx(d * d / 3, rel=1e-6)
    q = quadrature_moment_oracle(2.0, d, 2)
    assert q == pytest.approx(surveillance_second_moment(2.0, d, MomentMode.CORRECTED), rel=1e-12)
    assert q != pytest.approx(surveillance_second_moment(2.0, d, MomentMode.PAPER_COMPAT), rel=1e-3)


def test_quadrature_domain():
    with pytest.raises(DomainError):
        quadrature_moment_oracle(1.0, 1.0, 3)
    with pytest.raises(DomainError):
        quadrature_moment_oracle(0.0, 1.0, 1)


def test_ks_distance_exact_small_case():
    assert ks_distance([0.5], lambda t: t) == pytest.approx(0.5)
    assert ks_distance([0.25, 0.75], lambda t: t) == pytest.approx(0.25)
    with pytest.raises(DomainError):
        ks_distance([], lambda t: t)


@pytest.mark.parametrize(
    "priors",
    [
        GammaPriorPair(1.0, 1.0, 1.0, 1.0),
        PFIZER_MIMIC_PRIORS,
        GammaPriorPair(1.0, 0.01917808, 2.428571, 0.01917808),
    ],
)
def test_beta_representation(priors):
    assert beta_representation_check(priors, 100_000, seed=4) < 0.01


def test_beta_representation_mirror():
    p = PFIZER_MIMIC_PRIORS
    ratio = gamma_ratio_samples(p, 100_000, seed=6)
    assert ks_distance(1 - ratio, lambda t: reg_inc_beta(t, p.a_c, p.a_v)) < 0.01


def test_beta_representation_needs_samples():
    with pytest.raises(DomainError):
        beta_representation_check(PFIZER_MIMIC_PRIORS, 100, seed=0)


def test_ks_shrinks_with_sample_size():
    p = DEFAULT_ELICITED_PRIORS
    cdf = lambda t: reg_inc_beta(t, p.a_v, p.a_c)
    small = [ks_distance(gamma_ratio_samples(p, 2_000, seed=s), cdf) for s in range(30)]
    large = [ks_distance(gamma_ratio_samples(p, 4_000, seed=100 + s), cdf) for s in range(30)]
    assert np.mean(large) < np.mean(small)


def test_grid_oracle_resolution_stable():
    fine = grid_posterior_ve(PFIZER_INTERIM, PFIZER_MIMIC_PRIORS, PAPER_LIKELIHOOD, n_points=401)
    mid = grid_posterior_ve(PFIZER_INTERIM, PFIZER_MIMIC_PRIORS, PAPER_LIKELIHOOD, n_points=201)
    coarse = grid_posterior_ve(PFIZER_INTERIM, PFIZER_MIMIC_PRIORS, PAPER_LIKELIHOOD, n_points=60, width=10.0)
    assert coarse.mean_ve == pytest.approx(fine.mean_ve, abs=1e-4)
    assert mid.mean_ve == pytest.approx(fine.mean_ve, abs=1e-6)
    assert mid.ci[0] == pytest.approx(fine.ci[0], abs=5e-4)
    assert mid.ci[1] == pytest.approx(fine.ci[1], abs=5e-4)
    assert fine.ci[0] < fine.mean_ve < fine.ci[1]
    trapezoid = getattr(np, "trapezoid", None) or np.trapz
    assert trapezoid(fine.log_ratio_density, fine.log_ratio_grid) == pytest.approx(1.0, abs=1e-12)
