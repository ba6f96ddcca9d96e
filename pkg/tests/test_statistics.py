"""
Tests for deterministic Monte Carlo reductions.
"""

import math

import numpy as np
import pytest

from sampling.statistics import (
    absolute_difference,
    central_difference,
    default_step,
    estimate,
    sample_mean,
    scaled,
    standard_error,
    transformed,
    trapezoid_weights,
    tree_sum,
)
from shared.data_models import EstimateWithError, SamplingPlan
from shared.validators import ValidationError


def test_tree_sum_is_exact_on_integers():
    values = np.arange(1, 1002, dtype=np.float64)

    assert tree_sum(values) == 1001 * 1002 / 2
    assert tree_sum([]) == 0.0
    assert tree_sum([3.5]) == 3.5


def test_tree_sum_is_order_fixed():
    """Same values in the same order give bit-identical sums."""
    rng = np.random.default_rng(0)
    values = rng.standard_normal(1000) * 1e8

    assert tree_sum(values) == tree_sum(values.copy())
    assert tree_sum(values) == pytest.approx(math.fsum(values), rel=1e-12)


def test_standard_error():
    values = [1.0, 2.0, 3.0, 4.0]

    assert sample_mean(values) == 2.5
    assert standard_error(values) == pytest.approx(np.std(values, ddof=1) / 2.0)


def test_single_sample_has_infinite_error():
    est = estimate([0.7])

    assert est.mean == 0.7
    assert math.isinf(est.std_error)
    assert est.n_samples == 1


def test_estimate_records_the_plan():
    plan = SamplingPlan(n_samples=3, base_seed=42, crn_tag="x")
    est = estimate([1.0, 1.0, 1.0], plan)

    assert est.std_error == 0.0
    assert est.base_seed == 42
    assert est.crn_tag == "x"


@pytest.mark.parametrize("values", [[], [1.0, float("nan")], [float("inf")]])
def test_estimate_rejects_bad_values(values):
    with pytest.raises(ValidationError):
        estimate(values)


def test_scaled_and_transformed():
    est = EstimateWithError(mean=2.0, std_error=0.1, n_samples=10)

    affine = scaled(est, -3.0, 1.0)
    assert affine.mean == -5.0
    assert affine.std_error == pytest.approx(0.3)

    logged = transformed(est, math.log(est.mean), 1.0 / est.mean)
    assert logged.mean == pytest.approx(math.log(2.0))
    assert logged.std_error == pytest.approx(0.05)


def test_absolute_difference_uses_combined_error():
    lhs = EstimateWithError(mean=1.0, std_error=0.3, n_samples=10)
    rhs = EstimateWithError(mean=1.5, std_error=0.4, n_samples=8)

    diff = absolute_difference(lhs, rhs)

    assert diff.mean == 0.5
    assert diff.std_error == pytest.approx(0.5)
    assert diff.n_samples == 8


def test_trapezoid_weights():
    weights = trapezoid_weights([0.0, 0.5, 1.0])

    assert weights.tolist() == [0.25, 0.5, 0.25]
    grid = np.linspace(0.0, 1.0, 11)
    assert trapezoid_weights(grid) @ grid ** 2 == pytest.approx(1 / 3, abs=2e-3)


def test_central_difference_of_a_cubic():
    """Paired slopes of x³ per instance, with a bias bound from step halving."""
    coefficients = np.array([1.0, 2.0, 3.0])

    def values_at(x):
        return coefficients * x ** 3

    slope, bias = central_difference(values_at, 1.0, 0.1)

    # Central difference of x³ is 3x² + δ²
    assert slope.mean == pytest.approx(2.0 * (3.0 + 0.01))
    assert bias == pytest.approx((4.0 / 3.0) * 2.0 * (0.01 - 0.0025))
    assert abs(slope.mean - 6.0) <= bias + 1e-12


def test_default_step_is_a_fraction_of_the_parameter():
    assert default_step(2.0) == pytest.approx(0.04)


def test_standard_error_scales_as_root_n():
    """Repeating a sample k times keeps the spread and divides the error by about √k."""
    rng = np.random.default_rng(7)
    values = rng.standard_normal(100)
    n = len(values)

    for k in (4, 16):
        repeated = np.tile(values, k)
        expected = standard_error(values) * math.sqrt((n - 1) / (k * n - 1))
        assert standard_error(repeated) == pytest.approx(expected, rel=1e-10)
        assert standard_error(values) / standard_error(repeated) == pytest.approx(math.sqrt(k), rel=0.02)
