"""Reports for the t-derivative and the path reconstruction."""

from typing import List, Optional

from interpolation.derivative import dt_derivative
from interpolation.path import integrate_path
from sampling.statistics import absolute_difference
from shared.data_models import (
    ModelParams,
    PathReconstruction,
    Prior,
    RelationReport,
    SamplingPlan,
    ScalingPoint,
    ScalingReport,
)

from .reports import build_relation_report, build_scaling_report


def check_dt_derivative(
    params: ModelParams,
    prior: Prior,
    plan: SamplingPlan,
    fd_step: Optional[float] = 0.05,
) -> List[RelationReport]:
    """
    Pairwise agreement of the direct, integrated-by-parts and finite-difference
    t-derivatives at params.t.
    """
    derivative = dt_derivative(params, prior, plan, fd_step=fd_step, direct=params.t > 0)
    tag = f"t={params.t:g}"

    reports = []
    if derivative.direct is not None:
        reports.append(
            build_relation_report(
                f"dt_derivative[direct-ibp,{tag}]",
                derivative.direct,
                derivative.ibp,
                params=params,
                plan=plan,
            )
        )
    if derivative.finite_difference is not None:
        reports.append(
            build_relation_report(
                f"dt_derivative[fd-ibp,{tag}]",
                derivative.finite_difference,
                derivative.ibp,
                params=params,
                plan=plan,
                fd_bias=derivative.fd_bias,
                diagnostics={"fd_step": derivative.fd_step},
            )
        )
        if derivative.direct is not None:
            reports.append(
                build_relation_report(
                    f"dt_derivative[fd-direct,{tag}]",
                    derivative.finite_difference,
                    derivative.direct,
                    params=params,
                    plan=plan,
                    fd_bias=derivative.fd_bias,
                    diagnostics={"fd_step": derivative.fd_step},
                )
            )
    return reports


def path_report(path: PathReconstruction, params: ModelParams, plan: SamplingPlan) -> RelationReport:
    """Trapezoid integral against the paired endpoint difference."""
    closed_gap = absolute_difference(path.closed_form, path.quadrature)
    return build_relation_report(
        "path_reconstruction",
        path.quadrature,
        path.direct,
        params=params,
        plan=plan,
        fd_bias=path.quadrature_bias or 0.0,
        notes=list(path.notes),
        diagnostics={
            "closed_form": path.closed_form.mean,
            "closed_form_se": path.closed_form.std_error,
            "closed_form_gap": closed_gap.mean,
            "closed_form_gap_se": closed_gap.std_error,
        },
    )


def check_path_reconstruction(
    params: ModelParams,
    prior: Prior,
    plan: SamplingPlan,
    t_grid: Optional[List[float]] = None,
) -> RelationReport:
    path = integrate_path(params, prior, plan, t_grid)
    return path_report(path, params, plan)


def check_closed_form_scaling(
    prior: Prior,
    params: ModelParams,
    l_grid: List[int],
    plan: SamplingPlan,
    t_grid: Optional[List[float]] = None,
) -> ScalingReport:
    """Gap between the closed form and the trapezoid integral, over L."""
    points = []
    for L in l_grid:
        scaled_params = params.at_size(L)
        path = integrate_path(scaled_params, prior, plan, t_grid)
        points.append(
            ScalingPoint(
                L=L,
                M=scaled_params.M,
                sub_set_size=scaled_params.S,
                residual=absolute_difference(path.closed_form, path.quadrature),
                diagnostics={"closed_form": path.closed_form.mean, "quadrature": path.quadrature.mean},
            )
        )
    return build_scaling_report("closed_form_path", points, params=params, plan=plan)
