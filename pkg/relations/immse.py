"""
I-MMSE relations.

Exact finite-L identities are returned as RelationReports; statements that
only hold as L → ∞ are returned as ScalingReports over an L grid.
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from sampling import observables
from sampling.quantities import measurement_mmse, mmse
from sampling.sampler import get_sampler
from sampling.statistics import (
    absolute_difference,
    central_difference,
    default_step,
    estimate,
    scaled,
    transformed,
)
from shared.config import get_config
from shared.data_models import (
    EstimateWithError,
    ModelParams,
    Prior,
    RelationReport,
    SamplingPlan,
    ScalingPoint,
    ScalingReport,
)
from shared.validators import ModelValidator, ValidationError

from .reports import build_relation_report, build_scaling_report


def _grid(l_grid: Optional[Sequence[int]]) -> List[int]:
    grid = list(l_grid) if l_grid is not None else list(get_config().analysis.l_grid)
    ModelValidator.validate_l_grid(grid)
    return grid


def _snr_slope(
    base: ModelParams,
    prior: Prior,
    plan: SamplingPlan,
    fd_step: Optional[float],
) -> Tuple[EstimateWithError, float, float]:
    """Paired central difference of i_L in Δ^{-1}: (estimate, bias bound, step)."""
    snr = base.snr
    step = fd_step if fd_step is not None else default_step(snr)
    ModelValidator.validate_step(step, snr, "snr")

    sampler = get_sampler()

    def values_at(value: float) -> np.ndarray:
        return sampler.run(base.with_updates(delta=1.0 / value), prior, plan).values(
            observables.mutual_info_term
        )

    slope, fd_bias = central_difference(values_at, snr, step, plan)
    return slope, fd_bias, step


def check_canonical_immse(
    params: ModelParams,
    prior: Prior,
    plan: SamplingPlan,
    fd_step: Optional[float] = None,
) -> RelationReport:
    """
    di_L/dΔ^{-1} = (αB/2)·Y_M at finite L.

    Params are restricted to the base model (t = h = 0, no S rows).

    Args:
        params: Model parameters
        prior: Section prior
        plan: Sampling plan (CRN across the FD evaluations)
        fd_step: Step in Δ^{-1}; defaults to 2% of Δ^{-1}

    Raises:
        ValidationError: If M = 0 or Δ^{-1} − fd_step ≤ 0
    """
    base = params.base_model()
    if base.M == 0:
        raise ValidationError("the canonical I-MMSE relation needs M >= 1")

    lhs, fd_bias, step = _snr_slope(base, prior, plan, fd_step)
    rhs = scaled(measurement_mmse(base, prior, plan), base.M / (2.0 * base.L))

    notes = []
    if lhs.mean < -4.0 * lhs.std_error - fd_bias:
        notes.append("finite-difference slope is negative beyond its error")

    return build_relation_report(
        "canonical_immse",
        lhs,
        rhs,
        params=base,
        plan=plan,
        fd_bias=fd_bias,
        notes=notes,
        diagnostics={"fd_step": step},
    )


def _mmse_ratio(E: EstimateWithError, snr_weight: float) -> EstimateWithError:
    """E/(1 + E·snr_weight) by the delta method."""
    denominator = 1.0 + E.mean * snr_weight
    return transformed(E, E.mean / denominator, 1.0 / denominator ** 2)


def check_snr_immse(
    prior: Prior,
    l_grid: Optional[Sequence[int]],
    params: ModelParams,
    plan: SamplingPlan,
) -> ScalingReport:
    """
    Y_M = E_L/(1 + E_L/Δ) + o_L(1), tested as a decaying residual over L.

    Args:
        prior: Section prior
        l_grid: Section counts; defaults to the configured grid
        params: Template; M scales with L at fixed α
        plan: Sampling plan used at every L
    """
    grid = _grid(l_grid)
    points = []
    for L in grid:
        base = params.at_size(L).base_model()
        Y = measurement_mmse(base, prior, plan)
        E = mmse(base, prior, plan)
        rhs = _mmse_ratio(E, base.snr)
        points.append(
            ScalingPoint(
                L=L,
                M=base.M,
                sub_set_size=0,
                residual=absolute_difference(Y, rhs),
                diagnostics={"lhs": Y.mean, "rhs": rhs.mean},
            )
        )

    return build_scaling_report("snr_immse", points, params=params.base_model(), plan=plan)


def _alpha_sides(
    params: ModelParams,
    prior: Prior,
    plan: SamplingPlan,
    dM: int,
) -> Tuple[EstimateWithError, EstimateWithError]:
    """(i_{M+dM} − i_M)/(dM/N) on nested instances, and (B/2)·ln(1 + E_L/Δ)."""
    if dM < 1:
        raise ValidationError(f"dM must be >= 1, got {dM}")

    base = params.base_model()
    upper = base.with_updates(M=base.M + dM)
    sampler = get_sampler()

    lower_info = sampler.run(base, prior, plan).values(observables.mutual_info_term)
    upper_info = sampler.run(upper, prior, plan).values(observables.mutual_info_term)
    lhs = estimate((upper_info - lower_info) / (dM / base.N), plan)

    E = mmse(base, prior, plan)
    half_B = base.B / 2.0
    rhs = transformed(E, half_B * math.log1p(E.mean / base.delta), half_B / (base.delta + E.mean))
    return lhs, rhs


def check_alpha_immse(
    prior: Prior,
    params: ModelParams,
    plan: SamplingPlan,
    dM: int = 1,
    l_grid: Optional[Sequence[int]] = None,
) -> Tuple[RelationReport, ScalingReport]:
    """
    di/dα = (B/2)·ln(1 + E/Δ) through a forward difference in M.

    Rows are keyed by index, so the M and M + dM models share their first M
    rows. FD bias and the o_L(1) term cannot be separated at integer dM; the
    report at params.L and the residual series over L carry them jointly.

    Returns:
        (report at params.L, scaling report over the L grid)
    """
    base = params.base_model()
    lhs, rhs = _alpha_sides(base, prior, plan, dM)
    report = build_relation_report(
        "alpha_immse",
        lhs,
        rhs,
        params=base,
        plan=plan,
        notes=["forward difference in M; FD bias included in the residual"],
        diagnostics={"dM": float(dM)},
    )

    points = []
    for L in _grid(l_grid):
        scaled_params = base.at_size(L)
        lhs_L, rhs_L = _alpha_sides(scaled_params, prior, plan, dM)
        points.append(
            ScalingPoint(
                L=L,
                M=scaled_params.M,
                sub_set_size=0,
                residual=absolute_difference(lhs_L, rhs_L),
                diagnostics={"lhs": lhs_L.mean, "rhs": rhs_L.mean},
            )
        )
    scaling = build_scaling_report("alpha_immse", points, params=base, plan=plan)
    return report, scaling


def _log_identity_sides(
    params: ModelParams,
    prior: Prior,
    plan: SamplingPlan,
    fd_step: Optional[float],
    dM: int,
) -> Tuple[EstimateWithError, EstimateWithError, float]:
    base = params.base_model()
    if base.M == 0:
        raise ValidationError("the log identity needs M >= 1")

    slope, fd_bias, _ = _snr_slope(base, prior, plan, fd_step)
    factor = 2.0 * base.L * base.snr / base.M  # (2/αB)·Δ^{-1}
    lhs = scaled(slope, factor)

    alpha_slope, _ = _alpha_sides(base, prior, plan, dM)
    decay = math.exp(-(2.0 / base.B) * alpha_slope.mean)
    rhs = transformed(alpha_slope, 1.0 - decay, (2.0 / base.B) * decay)
    return lhs, rhs, factor * fd_bias


def check_log_identity(
    prior: Prior,
    params: ModelParams,
    plan: SamplingPlan,
    fd_step: Optional[float] = None,
    dM: int = 1,
    l_grid: Optional[Sequence[int]] = None,
) -> Tuple[RelationReport, ScalingReport]:
    """
    (2/αB)·di/d ln Δ^{-1} = 1 − exp(−(2/B)·di/dα).

    Returns:
        (report at params.L, scaling report over the L grid)
    """
    base = params.base_model()
    lhs, rhs, fd_bias = _log_identity_sides(base, prior, plan, fd_step, dM)
    report = build_relation_report(
        "log_identity", lhs, rhs, params=base, plan=plan, fd_bias=fd_bias
    )

    points = []
    for L in _grid(l_grid):
        scaled_params = base.at_size(L)
        lhs_L, rhs_L, bias_L = _log_identity_sides(scaled_params, prior, plan, fd_step, dM)
        residual = absolute_difference(lhs_L, rhs_L)
        residual = residual.model_copy(update={"std_error": residual.std_error + bias_L})
        points.append(
            ScalingPoint(
                L=L,
                M=scaled_params.M,
                sub_set_size=0,
                residual=residual,
                diagnostics={"lhs": lhs_L.mean, "rhs": rhs_L.mean, "fd_bias": bias_L},
            )
        )
    scaling = build_scaling_report("log_identity", points, params=base, plan=plan)
    return report, scaling


def check_side_channel_immse(
    params: ModelParams,
    prior: Prior,
    plan: SamplingPlan,
    fd_step: Optional[float] = None,
) -> RelationReport:
    """
    di_{t,h}/dh = E_{t,h}/2 + s_max·E Σ_i|Ẑ_i|/(2√h·L) at finite L.

    Raises:
        ValidationError: If h − fd_step ≤ 0
    """
    if params.h <= 0:
        raise ValidationError("the side-channel relation needs h > 0")

    step = fd_step if fd_step is not None else default_step(params.h)
    ModelValidator.validate_step(step, params.h, "h")

    sampler = get_sampler()

    def values_at(h: float) -> np.ndarray:
        return sampler.run(params.with_updates(h=h), prior, plan).values(
            observables.mutual_info_term
        )

    lhs, fd_bias = central_difference(values_at, params.h, step, plan)
    rhs = sampler.run(params, prior, plan).estimate(observables.side_channel_slope_term)

    logger.debug(f"side channel slope at h={params.h}: fd={lhs.mean}, gibbs={rhs.mean}")
    return build_relation_report(
        "side_channel_immse",
        lhs,
        rhs,
        params=params,
        plan=plan,
        fd_bias=fd_bias,
        diagnostics={"fd_step": step},
    )
