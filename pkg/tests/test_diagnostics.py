import math

import numpy as np
import pytest

from ve_infer import DomainError, effective_sample_size, split_rhat, summarize_draws


def ar1(n_chains, n, rho, seed):
    gen = np.random.default_rng(seed)
    x = np.empty((n_chains, n))
    x[:, 0] = gen.standard_normal(n_chains) / math.sqrt(1 - rho**2)
    eps = gen.standard_normal((n_chains, n))
    for t in range(1, n):
        x[:, t] = rho * x[:, t - 1] + eps[:, t]
    return x


def test_iid_uniform_pseudo_chain():
    gen = np.random.default_rng(1)
    draws = gen.random((4, 5000))
    s = summarize_draws(draws, 0.95, thresholds=(0.5,))
    se = math.sqrt(1 / 12 / draws.size)
    assert abs(s.mean_ve - 0.5) <= 3 * se
    assert s.ess == pytest.approx(draws.size, rel=0.2)
    assert s.ess <= draws.size
    assert abs(s.r_hat - 1) < 0.01
    assert s.ci[0] < s.median_ve < s.ci[1]
    assert s.ci[0] == pytest.approx(0.025, abs=0.01)
    assert s.prob_ve_above[0.5] == pytest.approx(0.5, abs=0.02)


@pytest.mark.parametrize("rho", [0.5, 0.9])
def test_ar1_ess(rho):
    x = ar1(4, 20000, rho, seed=3)
    expected = x.size * (1 - rho) / (1 + rho)
    assert effective_sample_size(x) == pytest.approx(expected, rel=0.15)


def test_rhat_detects_disagreeing_chains():
    gen = np.random.default_rng(2)
    x = gen.standard_normal((4, 2000))
    x[0] += 1.0
    assert split_rhat(x) > 1.05
    assert split_rhat(gen.standard_normal((4, 2000))) < 1.01


def test_rhat_detects_drift_within_chain():
    x = np.linspace(0, 1, 4000)[None, :] + np.random.default_rng(0).normal(0, 0.05, (1, 4000))
    assert split_rhat(x) > 1.1


def test_degenerate_chain_flagged():
    s = summarize_draws(np.full((2, 1000), 0.9))
    assert s.ci == (0.9, 0.9)
    assert s.r_hat == 1.0
    assert any("degenerate" in w for w in s.warnings)


def test_empty_and_short_chains_rejected():
    with pytest.raises(DomainError, match="empty"):
        summarize_draws(np.empty((2, 0)))
    with pytest.raises(DomainError, match="1000"):
        summarize_draws(np.zeros((2, 400)) + np.arange(400))


def test_single_chain_warns():
    s = summarize_draws(np.random.default_rng(0).random((1, 2000)))
    assert any("single chain" in w for w in s.warnings)


def test_level_validation():
    with pytest.raises(DomainError):
        summarize_draws(np.random.default_rng(0).random((2, 1000)), level=1.0)


def test_to_dict_round_numbers():
    s = summarize_draws(np.random.default_rng(0).random((2, 1000)), 0.9, (0.3,), acceptance_rate=(0.3, 0.4))
    d = s.to_dict()
    assert d["ci"]["level"] == 0.9
    assert d["prob_ve_above"].keys() == {"0.3"}
    assert d["acceptance_rate"] == [0.3, 0.4]
    assert d["n_draws"] == 2000 and d["n_chains"] == 2
