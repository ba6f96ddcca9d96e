"""
Tests for the I-MMSE relations, the interpolation lemmas and the bounds.
"""

import pytest

from relations import (
    check_alpha_immse,
    check_canonical_immse,
    check_lemma_mmse_relation,
    check_log_identity,
    check_moment_bounds,
    check_mmse_variation,
    check_side_channel_immse,
    check_snr_immse,
    concentration_scan,
)
from shared.data_models import ModelParams, SamplingPlan
from shared.validators import ValidationError

GRID = [2, 3, 4]


@pytest.fixture
def plan():
    return SamplingPlan(n_samples=300, base_seed=2718, crn_tag="relations")


def test_canonical_immse_holds(binary, plan):
    """The snr derivative of i_L equals (αB/2)·Y_M at finite L."""
    params = ModelParams(L=6, B=1, M=6, delta=1.0)

    report = check_canonical_immse(params, binary, plan, fd_step=0.02)

    assert report.name == "canonical_immse"
    assert report.params.t == 0.0 and report.params.S == 0
    assert report.fd_bias >= 0.0
    assert report.passed, report


def test_canonical_immse_single_atom(zero_prior, plan):
    report = check_canonical_immse(ModelParams(L=4, B=1, M=4, delta=1.0), zero_prior, plan)

    assert report.lhs.mean == 0.0
    assert report.rhs.mean == 0.0
    assert report.passed


def test_canonical_immse_rejects_bad_steps(binary, plan):
    params = ModelParams(L=4, B=1, M=4, delta=1.0)

    with pytest.raises(ValidationError):
        check_canonical_immse(params, binary, plan, fd_step=1.5)
    with pytest.raises(ValidationError):
        check_canonical_immse(params.with_updates(M=0), binary, plan)


def test_side_channel_immse_holds(binary, plan):
    params = ModelParams(L=4, B=1, M=4, delta=1.0, t=0.5, h=0.2, sub_set_size=1)

    report = check_side_channel_immse(params, binary, plan)

    assert report.diagnostics["fd_step"] == pytest.approx(0.004)
    assert report.passed, report


def test_side_channel_needs_positive_h(binary, plan):
    with pytest.raises(ValidationError):
        check_side_channel_immse(ModelParams(L=3, B=1, M=3, delta=1.0), binary, plan)


def test_snr_immse_single_atom(zero_prior, plan):
    """K = 1: residual 0 at every L."""
    report = check_snr_immse(zero_prior, GRID, ModelParams(L=4, B=1, M=4, delta=1.0), plan)

    assert [p.residual.mean for p in report.points] == [0.0, 0.0, 0.0]
    assert [p.M for p in report.points] == GRID
    assert report.passed


def test_snr_immse_at_large_noise(binary, plan):
    """Δ = 1e6: both sides tend to the prior variance."""
    report = check_snr_immse(binary, GRID, ModelParams(L=4, B=1, M=4, delta=1e6), plan)

    for point in report.points:
        assert point.residual.mean <= 4.0 * point.residual.std_error + 1e-3


def test_alpha_immse_at_large_noise(binary, plan):
    report, scaling = check_alpha_immse(binary, ModelParams(L=4, B=1, M=4, delta=1e6), plan, l_grid=GRID)

    assert abs(report.rhs.mean) < 1e-5
    assert report.passed
    assert scaling.l_grid == GRID


def test_alpha_immse_rejects_bad_increment(binary, plan):
    with pytest.raises(ValidationError):
        check_alpha_immse(binary, ModelParams(L=4, B=1, M=4, delta=1.0), plan, dM=0, l_grid=GRID)


def test_log_identity_single_atom(zero_prior, plan):
    report, scaling = check_log_identity(zero_prior, ModelParams(L=4, B=1, M=4, delta=1.0), plan, l_grid=GRID)

    assert report.lhs.mean == 0.0
    assert report.rhs.mean == 0.0
    assert report.passed
    assert scaling.passed


def test_lemma_mmse_relation_single_atom(zero_prior, plan):
    params = ModelParams(L=4, B=1, M=4, delta=1.0, t=1.0, h=0.01, sub_set_size=1)

    report = check_lemma_mmse_relation(zero_prior, params, GRID, plan)

    assert report.name == "lemma_mmse_relation[t=1]"
    assert all(p.residual.mean == 0.0 for p in report.points)
    assert all(p.sub_set_size == 1 for p in report.points)


def test_lemma_mmse_relation_needs_side_channel(binary, plan):
    with pytest.raises(ValidationError):
        check_lemma_mmse_relation(binary, ModelParams(L=4, B=1, M=4, delta=1.0, t=1.0), GRID, plan)


def test_mmse_variation_single_atom(zero_prior, plan):
    params = ModelParams(L=4, B=1, M=4, delta=1.0, h=0.01, sub_set_size=1)

    report = check_mmse_variation(zero_prior, params, GRID, plan)

    assert report.passed
    assert all(p.diagnostics["dE_dt_at_1"] == 0.0 for p in report.points)


def test_mmse_variation_reports_the_slope(binary, plan):
    params = ModelParams(L=4, B=1, M=4, delta=1.0, h=0.01, sub_set_size=1)

    report = check_mmse_variation(binary, params, GRID, plan)

    for point in report.points:
        assert "signed_difference" in point.diagnostics
        assert point.diagnostics["dE_dt_at_1_se"] >= 0.0
        assert point.residual.mean == abs(point.diagnostics["signed_difference"])


def test_concentration_scan(binary, plan):
    params = ModelParams(L=4, B=1, M=4, delta=1.0, h=0.01, sub_set_size=1)

    report = concentration_scan(binary, params, GRID, (0.05, 0.5), plan, h_points=3)

    assert report.name == "concentration"
    assert [p.L for p in report.points] == GRID
    assert all(p.residual.mean >= 0.0 for p in report.points)


def test_concentration_needs_a_window(binary, plan):
    params = ModelParams(L=4, B=1, M=4, delta=1.0, h=0.01, sub_set_size=1)

    with pytest.raises(ValidationError):
        concentration_scan(binary, params, GRID, (0.5, 0.05), plan)


def test_moment_bounds(ternary, plan):
    """Even moments of φs stay below (2n−1)!!·(B·s_max²)^n."""
    params = ModelParams(L=4, B=1, M=4, delta=1.0, sub_set_size=2)

    reports = check_moment_bounds(params, ternary, plan)

    assert [r.name for r in reports] == [f"moment_bounds[n={n}]" for n in (1, 2, 3, 4)]
    assert [r.rhs.mean for r in reports] == [4.0, 48.0, 960.0, 26880.0]
    assert all(r.kind == "upper_bound" and r.passed for r in reports)


def test_moment_bounds_single_atom(zero_prior, plan):
    reports = check_moment_bounds(ModelParams(L=3, B=1, M=3, delta=1.0), zero_prior, plan, max_order=2)

    assert all(r.lhs.mean == 0.0 and r.rhs.mean == 0.0 and r.passed for r in reports)


SCALING_GRID = [4, 8, 12, 16]


@pytest.fixture
def scaling_params():
    return ModelParams(L=4, B=1, M=4, delta=1.0, h=0.01, sub_set_size=1)


@pytest.mark.slow
def test_concentration_decays_with_binary_prior(binary, scaling_params):
    """The integrated overlap fluctuation falls with L and at least halves over the grid."""
    plan = SamplingPlan(n_samples=500, base_seed=9, crn_tag="lemmas")

    report = concentration_scan(binary, scaling_params, SCALING_GRID, (0.05, 0.5), plan)

    residuals = [p.residual.mean for p in report.points]
    assert all(r > 0.0 for r in residuals)
    assert report.passed
    assert report.halved is True
    assert report.slope is not None and report.slope < 0.0


@pytest.mark.slow
def test_mmse_variation_decays_with_binary_prior(binary, scaling_params):
    """|E_1 − E_0| is smaller at L = 16 than at L = 4."""
    plan = SamplingPlan(n_samples=1000, base_seed=9, crn_tag="lemmas")

    report = check_mmse_variation(binary, scaling_params, SCALING_GRID, plan)

    first, last = report.points[0].residual, report.points[-1].residual
    assert report.passed
    assert last.mean < first.mean
    assert [p.L for p in report.points] == SCALING_GRID
