import csv
import io
import math

import numpy as np
import pytest

from ve_infer import (
    DEFAULT_ELICITED_PRIORS,
    PAPER_LIKELIHOOD,
    PFIZER_INTERIM,
    PFIZER_MIMIC_PRIORS,
    DomainError,
    GammaPriorPair,
    LikelihoodConfig,
    McmcConfig,
    NumericalError,
    TrialData,
    effective_sample_size,
    sample_posterior,
)
from ve_infer.mcmc import CSV_COLUMNS, initial_rates
from ve_infer.model import log_target


def test_config_validation():
    with pytest.raises(DomainError):
        McmcConfig(burn_in=10, iterations=10)
    with pytest.raises(DomainError):
        McmcConfig(chains=0)
    with pytest.raises(DomainError):
        McmcConfig(target_acceptance=0.7)
    with pytest.raises(DomainError):
        McmcConfig(initial_step=0.0)
    with pytest.raises(ValueError):
        McmcConfig(seed=-1)
    with pytest.raises(ValueError):
        McmcConfig(seed=2**64)
    assert McmcConfig(seed=2**64 - 1).seed == 2**64 - 1


def test_initial_rates_continuity_corrected():
    d = TrialData(n_v=100, n_c=100, s_v=10.0, s_c=12.0, x_v=0, x_c=4, d=1.0)
    assert initial_rates(d) == (0.05, 4.5 / 12.0)


def test_chain_invariants(small_mcmc):
    ch = sample_posterior(PFIZER_INTERIM, PFIZER_MIMIC_PRIORS, small_mcmc, PAPER_LIKELIHOOD)
    assert ch.lambda_v.shape == (4, 4500)
    assert np.all(ch.lambda_v > 0) and np.all(ch.lambda_c > 0)
    assert np.array_equal(ch.ve, 1.0 - ch.lambda_v / ch.lambda_c)
    assert np.all((ch.acceptance_rate > 0.2) & (ch.acceptance_rate < 0.5))
    assert ch.warnings == []
    lp = log_target(ch.lambda_v[1, :50], ch.lambda_c[1, :50], PFIZER_INTERIM, PFIZER_MIMIC_PRIORS, PAPER_LIKELIHOOD)
    assert np.allclose(ch.log_post[1, :50], lp, rtol=1e-13, atol=1e-11)


def test_csv_format(small_mcmc):
    cfg = McmcConfig(chains=2, iterations=1200, burn_in=200, seed=3)
    ch = sample_posterior(PFIZER_INTERIM, DEFAULT_ELICITED_PRIORS, cfg)
    text = ch.to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 1 + 2 * 1000
    first = rows[1]
    assert first[0] == "0" and first[1] == "200"
    assert float(first[2]) == ch.lambda_v[0, 0]
    assert float(first[4]) == ch.ve[0, 0]
    assert rows[1001][0] == "1"


def test_determinism_byte_identical(tmp_path):
    cfg = McmcConfig(chains=3, iterations=2000, burn_in=500, seed=99)
    a = sample_posterior(PFIZER_INTERIM, DEFAULT_ELICITED_PRIORS, cfg)
    b = sample_posterior(PFIZER_INTERIM, DEFAULT_ELICITED_PRIORS, cfg)
    a.to_csv(tmp_path / "a.csv")
    b.to_csv(tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    c = sample_posterior(PFIZER_INTERIM, DEFAULT_ELICITED_PRIORS, McmcConfig(chains=3, iterations=2000, burn_in=500, seed=100))
    assert not np.array_equal(a.lambda_v, c.lambda_v)


def test_chains_do_not_depend_on_chain_count():
    # Each chain owns its stream and its own adaptation state.
    two = sample_posterior(PFIZER_INTERIM, DEFAULT_ELICITED_PRIORS, McmcConfig(chains=2, iterations=2000, burn_in=500, seed=5))
    three = sample_posterior(PFIZER_INTERIM, DEFAULT_ELICITED_PRIORS, McmcConfig(chains=3, iterations=2000, burn_in=500, seed=5))
    assert np.array_equal(two.lambda_v, three.lambda_v[:2])
    assert np.array_equal(two.lambda_c, three.lambda_c[:2])


@pytest.mark.slow
@pytest.mark.parametrize("priors", [GammaPriorPair(2.0, 3.0, 5.0, 0.5), PFIZER_MIMIC_PRIORS, DEFAULT_ELICITED_PRIORS])
def test_prior_only_recovers_gamma_moments(priors):
    cfg = McmcConfig(chains=4, iterations=30000, burn_in=5000, seed=2024)
    ch = sample_posterior(PFIZER_INTERIM, priors, cfg, include_likelihood=False)
    for draws, a, b in ((ch.lambda_v, priors.a_v, priors.b_v), (ch.lambda_c, priors.a_c, priors.b_c)):
        mean, var = a / b, a / b**2
        ess = effective_sample_size(draws)
        assert abs(draws.mean() - mean) <= 3 * math.sqrt(var / ess)
        dev2 = (draws - draws.mean()) ** 2
        ess2 = effective_sample_size(dev2)
        # Var of the squared deviation is mu4 - var^2 = var^2 (6/a + 2) for a Gamma.
        se_var = math.sqrt(var**2 * (6.0 / a + 2.0) / ess2)
        assert abs(dev2.mean() - var) <= 3 * se_var


def test_nonfinite_start_raises():
    # lambda_c start of ~5/yr with d = 1 makes the paper-mode variance negative.
    data = TrialData(n_v=1000, n_c=1000, s_v=400.0, s_c=100.0, x_v=10, x_c=500, d=1.0)
    with pytest.raises(NumericalError, match="surveillance_c"):
        sample_posterior(data, DEFAULT_ELICITED_PRIORS, McmcConfig(iterations=2000, burn_in=500), PAPER_LIKELIHOOD)


def test_low_acceptance_is_flagged():
    cfg = McmcConfig(chains=2, iterations=1500, burn_in=0, seed=1, initial_step=30.0)
    ch = sample_posterior(PFIZER_INTERIM, DEFAULT_ELICITED_PRIORS, cfg)
    assert len(ch.warnings) == 2
    assert "acceptance" in ch.warnings[0]


def test_zero_vaccine_cases_run():
    data = TrialData(n_v=17000, n_c=17000, s_v=2200.0, s_c=2200.0, x_v=0, x_c=60, d=0.29)
    ch = sample_posterior(data, DEFAULT_ELICITED_PRIORS, McmcConfig(chains=2, iterations=3000, burn_in=1000, seed=8), LikelihoodConfig())
    assert np.all(np.isfinite(ch.log_post))
    assert ch.ve.mean() > 0.9
