"""
Interpolation lemmas as L-scaling tests.

- Sub-measurement MMSE against E_{t,h}/(1 + E_{t,h}·t/Δ)
- Variation of E_{t,h} along t, with its Gibbs-covariance derivative
- Concentration of the overlap over an h window
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from sampling import observables
from sampling.quantities import mmse, overlap_fluctuation_values, sub_measurement_mmse
from sampling.sampler import get_sampler
from sampling.statistics import absolute_difference, estimate, scaled, transformed, trapezoid_weights
from shared.config import get_config
from shared.data_models import EstimateWithError, ModelParams, Prior, SamplingPlan, ScalingPoint, ScalingReport
from shared.validators import ModelValidator, ValidationError

from .reports import build_scaling_report

# Upper end of the sub-extensive exponent range the variation bound is proved for
MAX_VARIATION_EXPONENT = 1.0 / 20.0


def _grid(l_grid: Optional[Sequence[int]]) -> List[int]:
    grid = list(l_grid) if l_grid is not None else list(get_config().analysis.l_grid)
    ModelValidator.validate_l_grid(grid)
    return grid


def _require_interpolation(params: ModelParams, name: str) -> None:
    if params.h <= 0:
        raise ValidationError(f"{name} needs h > 0, got h={params.h}")
    if params.S == 0:
        raise ValidationError(f"{name} needs |S| >= 1")


def check_lemma_mmse_relation(
    prior: Prior,
    params: ModelParams,
    l_grid: Optional[Sequence[int]],
    plan: SamplingPlan,
) -> ScalingReport:
    """
    Y^{(S)}_{t,h} = E_{t,h}/(1 + E_{t,h}·t/Δ) + o_L(1) at the template's t.

    Args:
        prior: Section prior
        params: Template (t, h, Δ, |S|); M scales with L at fixed α
        l_grid: Section counts; defaults to the configured grid
        plan: Sampling plan used at every L

    Raises:
        ValidationError: If h = 0 or |S| = 0
    """
    _require_interpolation(params, "the sub-measurement MMSE relation")

    points = []
    for L in _grid(l_grid):
        scaled_params = params.at_size(L)
        Y = sub_measurement_mmse(scaled_params, prior, plan)
        E = mmse(scaled_params, prior, plan)
        denominator = 1.0 + E.mean * scaled_params.t / scaled_params.delta
        rhs = transformed(E, E.mean / denominator, 1.0 / denominator ** 2)
        points.append(
            ScalingPoint(
                L=L,
                M=scaled_params.M,
                sub_set_size=scaled_params.S,
                residual=absolute_difference(Y, rhs),
                diagnostics={"lhs": Y.mean, "rhs": rhs.mean},
            )
        )

    return build_scaling_report(f"lemma_mmse_relation[t={params.t:g}]", points, params=params, plan=plan)


def _variation_at(
    params: ModelParams,
    prior: Prior,
    plan: SamplingPlan,
) -> Tuple[EstimateWithError, EstimateWithError]:
    """Paired E_{1,h} − E_{0,h} and dE_{t,h}/dt at t = 1."""
    sampler = get_sampler()
    end = sampler.run(params.with_updates(t=1.0), prior, plan)
    start = sampler.run(params.with_updates(t=0.0), prior, plan)

    difference = estimate(
        end.values(observables.mmse_term) - start.values(observables.mmse_term), plan
    )
    slope = scaled(end.estimate(observables.overlap_row_covariance), -1.0)
    return difference, slope


def check_mmse_variation(
    prior: Prior,
    params: ModelParams,
    l_grid: Optional[Sequence[int]],
    plan: SamplingPlan,
) -> ScalingReport:
    """
    E_{1,h} − E_{0,h} = o_L(1), with CRN pairing across the two endpoints.

    Each point also carries dE_{t,h}/dt at t = 1, computed as minus the summed
    Gibbs covariance of ℰ with ∂_t H.

    Raises:
        ValidationError: If h = 0 or |S| = 0
    """
    _require_interpolation(params, "the MMSE variation")
    if not 0 < params.u < MAX_VARIATION_EXPONENT:
        logger.warning(
            f"u = {params.u} is outside (0, {MAX_VARIATION_EXPONENT}); running with |S| = {params.S}"
        )

    points = []
    for L in _grid(l_grid):
        scaled_params = params.at_size(L)
        difference, slope = _variation_at(scaled_params, prior, plan)
        points.append(
            ScalingPoint(
                L=L,
                M=scaled_params.M,
                sub_set_size=scaled_params.S,
                residual=difference.model_copy(update={"mean": abs(difference.mean)}),
                diagnostics={
                    "signed_difference": difference.mean,
                    "dE_dt_at_1": slope.mean,
                    "dE_dt_at_1_se": slope.std_error,
                },
            )
        )

    return build_scaling_report("mmse_variation", points, params=params, plan=plan)


def concentration_scan(
    prior: Prior,
    params: ModelParams,
    l_grid: Optional[Sequence[int]],
    h_window: Tuple[float, float],
    plan: SamplingPlan,
    h_points: Optional[int] = None,
) -> ScalingReport:
    """
    ∫_a^ε dh E⟨δℰ²⟩ over L, by the trapezoid rule on a uniform h grid.

    The integral is taken per instance, so the error bar accounts for the
    correlation between grid points. The fitted slope is reported only.

    Raises:
        ValidationError: Unless 0 < a < ε
    """
    low, high = h_window
    ModelValidator.validate_h_window(low, high)
    h_points = h_points or get_config().analysis.h_grid_points
    h_grid = np.linspace(low, high, h_points)
    weights = trapezoid_weights(h_grid)

    points = []
    for L in _grid(l_grid):
        scaled_params = params.at_size(L)
        integrated = np.zeros(plan.n_samples)
        for weight, h in zip(weights, h_grid):
            integrated += weight * overlap_fluctuation_values(
                scaled_params.with_updates(h=float(h)), prior, plan
            )
        points.append(
            ScalingPoint(
                L=L,
                M=scaled_params.M,
                sub_set_size=scaled_params.S,
                residual=estimate(integrated, plan),
            )
        )

    return build_scaling_report(
        "concentration",
        points,
        params=params,
        plan=plan,
        notes=[
            f"h grid {h_points} points on [{low}, {high}]",
            "overlap centered at the plan's own MMSE estimate; bias O(1/n)",
        ],
    )
