"""
Tests for exact posterior enumeration against a naive direct sum.
"""

import numpy as np
import pytest

from model.energy import interp_energy
from model.instance import sample_instance
from model.prior import make_prior
from posterior import enumerate_posterior, gray_configurations, incremental_energies
from posterior.exceptions import EnumerationBudgetError
from shared.data_models import InstanceKey, ModelParams

from tests.oracles import naive_posterior

SUMMARY_FIELDS = [
    "mean",
    "second_moment",
    "row_mean",
    "row_sq",
    "marginals",
    "sub_row_section",
    "sub_overlap_row_sq",
]


def _assert_matches_oracle(summary, oracle, rtol=1e-10, atol=1e-12):
    assert summary.log_z == pytest.approx(oracle["log_z"], rel=rtol, abs=atol)
    assert summary.overlap_mean == pytest.approx(oracle["overlap_mean"], rel=rtol, abs=atol)
    assert summary.overlap_sq == pytest.approx(oracle["overlap_sq"], rel=rtol, abs=atol)
    for field in SUMMARY_FIELDS:
        np.testing.assert_allclose(getattr(summary, field), oracle[field], rtol=rtol, atol=atol)


def test_binary_two_sections_match_direct_sum(binary):
    """L = 2, M = 1, Δ = 1: every field matches the sum over 4 configurations."""
    params = ModelParams(L=2, B=1, M=1, delta=1.0, sub_set_size=0)
    inst = sample_instance(params, binary, 2024)

    summary = enumerate_posterior(inst, params)

    assert summary.n_configurations == 4
    _assert_matches_oracle(summary, naive_posterior(inst, params))


@pytest.mark.parametrize("t, h", [(0.0, 0.0), (0.3, 0.0), (0.0, 0.2), (1.0, 0.7)])
def test_interpolated_model_matches_direct_sum(ternary, t, h):
    """Three-atom prior with S rows and a side channel."""
    params = ModelParams(L=4, B=1, M=3, delta=0.7, t=t, h=h, sub_set_size=2)
    inst = sample_instance(params, ternary, InstanceKey(base_seed=8, index=1))

    _assert_matches_oracle(enumerate_posterior(inst, params), naive_posterior(inst, params))


def test_two_dimensional_sections_match_direct_sum():
    prior = make_prior([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]], [0.3, 0.5, 0.2])
    params = ModelParams(L=3, B=2, M=4, delta=1.3, t=0.6, h=0.05, sub_set_size=1)
    inst = sample_instance(params, prior, 31)

    _assert_matches_oracle(enumerate_posterior(inst, params), naive_posterior(inst, params))


def test_zero_weight_atom_has_zero_marginal():
    """Atoms outside the support are never enumerated."""
    prior = make_prior([[1.0], [-1.0], [5.0]], [0.5, 0.5, 0.0])
    params = ModelParams(L=3, B=1, M=2, delta=1.0, sub_set_size=1, t=0.5)
    inst = sample_instance(params, prior, 4)

    summary = enumerate_posterior(inst, params)

    assert summary.n_configurations == 8
    assert np.all(summary.marginals[:, 2] == 0.0)
    _assert_matches_oracle(summary, naive_posterior(inst, params))


def test_single_atom_prior(zero_prior):
    """K = 1, t = h = 0: log Z = −Σ z²/2, mean = s, rows vanish."""
    params = ModelParams(L=5, B=1, M=4, delta=1.0, sub_set_size=1)
    inst = sample_instance(params, zero_prior, 3)

    summary = enumerate_posterior(inst, params)

    assert summary.n_configurations == 1
    assert summary.log_z == pytest.approx(-0.5 * float(inst.z @ inst.z), rel=1e-14)
    assert np.array_equal(summary.mean, inst.s)
    assert np.all(summary.row_mean == 0.0)
    assert summary.overlap_mean == 0.0
    assert summary.section_mmse_term == 0.0


def test_no_measurements_gives_the_prior(ternary):
    """M = 0, |S| = 0, h = 0: posterior = prior, log Z = 0."""
    params = ModelParams(L=3, B=1, M=0, delta=1.0, sub_set_size=0)
    inst = sample_instance(params, ternary, 5)

    summary = enumerate_posterior(inst, params)

    assert summary.log_z == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(summary.mean, np.full(3, float(ternary.mean_section[0])), atol=1e-12)
    np.testing.assert_allclose(summary.marginals, np.tile(ternary.weights, (3, 1)), atol=1e-12)


def test_incremental_energies_match_direct_evaluation(ternary):
    """Gray-walk energy updates agree with a fresh evaluation at every step."""
    params = ModelParams(L=5, B=1, M=4, delta=0.9, t=0.4, h=0.3, sub_set_size=1)
    inst = sample_instance(params, ternary, 6)

    energies = incremental_energies(inst, params)
    configs = gray_configurations(ternary.K, params.L)
    direct = np.array([interp_energy(ternary.atoms[c].reshape(-1), inst, params) for c in configs])

    np.testing.assert_allclose(energies, direct, rtol=1e-12, atol=1e-12)


def test_section_permutation_invariance(binary):
    """Permuting sections together with the columns of φ leaves the summary invariant."""
    params = ModelParams(L=4, B=1, M=4, delta=1.0, t=0.5, h=0.1, sub_set_size=1)
    inst = sample_instance(params, binary, 9)
    order = np.array([2, 0, 3, 1])

    permuted = inst.model_copy(update={"phi": inst.phi[:, order], "s": inst.s[order], "zhat": inst.zhat[order]})

    original = enumerate_posterior(inst, params)
    shuffled = enumerate_posterior(permuted, params)

    assert shuffled.log_z == pytest.approx(original.log_z, rel=1e-12)
    np.testing.assert_allclose(shuffled.mean, original.mean[order], atol=1e-12)
    np.testing.assert_allclose(shuffled.row_mean, original.row_mean, atol=1e-12)


def test_small_noise_is_stable(binary):
    """Δ = 1e-3 puts huge energies in play; the log-sum-exp must stay finite."""
    params = ModelParams(L=6, B=1, M=6, delta=1e-3, sub_set_size=0)
    inst = sample_instance(params, binary, 10)

    summary = enumerate_posterior(inst, params)

    assert np.isfinite(summary.log_z)
    assert summary.marginals.sum(axis=1) == pytest.approx(np.ones(6))
    _assert_matches_oracle(summary, naive_posterior(inst, params), rtol=1e-9, atol=1e-9)


def test_budget_is_enforced(binary):
    params = ModelParams(L=12, B=1, M=2, delta=1.0, sub_set_size=0)
    inst = sample_instance(params, binary, 0)

    with pytest.raises(EnumerationBudgetError):
        enumerate_posterior(inst, params, budget=1024)


def test_summary_is_deterministic(binary, small_params):
    inst = sample_instance(small_params, binary, 21)

    first = enumerate_posterior(inst, small_params)
    second = enumerate_posterior(inst, small_params)

    assert first.log_z == second.log_z
    assert np.array_equal(first.marginals, second.marginals)


def _random_case(seed):
    """Prior and params with L ≤ 6, K ≤ 3, B ≤ 2, drawn from one seed."""
    rng = np.random.default_rng(seed)
    K = int(rng.integers(1, 4))
    B = int(rng.integers(1, 3))
    L = int(rng.integers(1, 7))
    prior = make_prior(rng.normal(size=(K, B)), rng.dirichlet(np.ones(K)))
    params = ModelParams(
        L=L,
        B=B,
        M=int(rng.integers(0, 6)),
        delta=float(rng.uniform(0.3, 3.0)),
        t=float(rng.uniform(0.0, 1.0)),
        h=float(rng.choice([0.0, rng.uniform(0.0, 0.5)])),
        sub_set_size=int(rng.integers(0, 3)),
    )
    return prior, params


@pytest.mark.parametrize("seed", range(100))
def test_random_instances_match_direct_sum(seed):
    """Random priors and parameters: the Gray walk agrees with the direct sum."""
    prior, params = _random_case(seed)
    inst = sample_instance(params, prior, InstanceKey(base_seed=seed, index=seed, crn_tag="oracle"))

    summary = enumerate_posterior(inst, params)

    assert summary.n_configurations == prior.K ** params.L
    _assert_matches_oracle(summary, naive_posterior(inst, params), rtol=1e-9, atol=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_summary_satisfies_jensen(ternary, seed):
    """Second moments dominate squared means for every row and for the overlap."""
    params = ModelParams(L=5, B=1, M=4, delta=0.8, t=0.6, h=0.2, sub_set_size=2)
    inst = sample_instance(params, ternary, InstanceKey(base_seed=3, index=seed))

    summary = enumerate_posterior(inst, params)

    assert np.all(summary.row_sq >= summary.row_mean ** 2 - 1e-12)
    assert summary.overlap_sq >= summary.overlap_mean ** 2 - 1e-12
    assert np.all(summary.second_moment >= summary.mean ** 2 - 1e-12)
