"""
Tests for the t-derivative and the path reconstruction.
"""

import pytest

from interpolation import default_t_grid, dt_derivative, integrate_path
from relations.path_checks import check_dt_derivative, check_path_reconstruction, path_report
from shared.data_models import ModelParams, SamplingPlan
from shared.validators import ValidationError


@pytest.fixture
def path_plan():
    return SamplingPlan(n_samples=150, base_seed=314, crn_tag="path")


def test_default_t_grid():
    grid = default_t_grid(11)

    assert len(grid) == 11
    assert grid[0] == 0.0
    assert grid[-1] == 1.0


def test_default_t_grid_from_config():
    assert len(default_t_grid()) == 11


def test_single_atom_derivatives_vanish(zero_prior, small_params, small_plan):
    """K = 1: direct, integrated-by-parts and finite-difference forms are all 0."""
    derivative = dt_derivative(small_params, zero_prior, small_plan, fd_step=0.05)

    assert derivative.direct.mean == 0.0
    assert derivative.ibp.mean == 0.0
    assert derivative.finite_difference.mean == 0.0
    assert derivative.difference.mean == 0.0


def test_three_forms_agree(binary, small_params, small_plan):
    """All three estimates of di/dt agree within their errors."""
    reports = check_dt_derivative(small_params, binary, small_plan, fd_step=0.05)

    assert [r.name for r in reports] == [
        "dt_derivative[direct-ibp,t=0.5]",
        "dt_derivative[fd-ibp,t=0.5]",
        "dt_derivative[fd-direct,t=0.5]",
    ]
    assert all(r.passed for r in reports)


def test_ibp_form_alone_at_t_zero(binary, small_params, small_plan):
    """At t = 0 only the integrated-by-parts form applies."""
    params = small_params.with_updates(t=0.0)
    derivative = dt_derivative(params, binary, small_plan, direct=False)

    assert derivative.direct is None
    assert derivative.difference is None
    assert derivative.ibp.mean > 0.0


def test_direct_form_rejected_at_t_zero(binary, small_params, small_plan):
    with pytest.raises(ValidationError):
        dt_derivative(small_params.with_updates(t=0.0), binary, small_plan)


def test_derivative_needs_sub_rows(binary, small_params, small_plan):
    with pytest.raises(ValidationError):
        dt_derivative(small_params.with_updates(sub_set_size=0), binary, small_plan)


def test_step_must_stay_inside_the_path(binary, small_params, small_plan):
    with pytest.raises(ValidationError):
        dt_derivative(small_params.with_updates(t=0.98), binary, small_plan, fd_step=0.05)


def test_path_reconstruction(binary, path_plan):
    """Trapezoid integral of the derivative matches i(1) − i(0)."""
    params = ModelParams(L=4, B=1, M=4, delta=1.0, h=0.01, sub_set_size=1)

    path = integrate_path(params, binary, path_plan, default_t_grid(9))

    assert [p.t for p in path.points] == default_t_grid(9)
    assert path.quadrature_bias is not None
    assert path.notes == []
    assert path.closed_form.mean > 0.0
    assert path_report(path, params, path_plan).passed


def test_path_notes(binary, path_plan):
    """h = 0 and an even coarse grid are recorded as notes."""
    params = ModelParams(L=3, B=1, M=3, delta=1.0, h=0.0, sub_set_size=1)

    path = integrate_path(params, binary, path_plan, [0.0, 0.5, 0.75, 1.0])

    assert path.quadrature_bias is None
    assert any("h = 0" in note for note in path.notes)
    assert any("only 4 points" in note for note in path.notes)


def test_single_atom_path_is_flat(zero_prior, path_plan):
    params = ModelParams(L=3, B=1, M=3, delta=1.0, h=0.01, sub_set_size=1)

    report = check_path_reconstruction(params, zero_prior, path_plan, default_t_grid(5))

    assert report.lhs.mean == 0.0
    assert report.rhs.mean == 0.0
    assert report.diagnostics["closed_form"] == 0.0
    assert report.passed


def test_invalid_t_grid(binary, path_plan):
    params = ModelParams(L=3, B=1, M=3, delta=1.0, h=0.01, sub_set_size=1)

    with pytest.raises(ValidationError):
        integrate_path(params, binary, path_plan, [0.0, 0.6, 0.4, 1.0])
    with pytest.raises(ValidationError):
        integrate_path(params, binary, path_plan, [0.1, 1.0])
