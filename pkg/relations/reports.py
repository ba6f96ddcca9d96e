"""
Building relation and scaling reports.

Every exact identity is judged by a z-score against the conservative combined
error √(se_lhs² + se_rhs²) plus any finite-difference bias bound. Scaling
statements are judged by monotone decay within error bars, or by a log-log
slope whose upper 95% bound is negative.
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy import stats

from shared.config import get_config
from shared.data_models import (
    EstimateWithError,
    ModelParams,
    RelationReport,
    SamplingPlan,
    ScalingPoint,
    ScalingReport,
)
from shared.validators import ModelValidator

# rhs offset applied to a relation named by IMMSE_BREAK_RELATION
BROKEN_SHIFT = 1.0e6


def _broken(name: str) -> bool:
    target = get_config().lab_config.break_relation
    return bool(target) and (name == target or name.startswith(f"{target}["))


def z_score(residual: float, combined_error: float) -> float:
    if combined_error == 0.0:
        return 0.0 if residual == 0.0 else math.copysign(math.inf, residual)
    if math.isinf(combined_error):
        return 0.0
    return residual / combined_error


def build_relation_report(
    name: str,
    lhs: EstimateWithError,
    rhs: EstimateWithError,
    params: Optional[ModelParams] = None,
    plan: Optional[SamplingPlan] = None,
    fd_bias: float = 0.0,
    kind: str = "equality",
    notes: Optional[List[str]] = None,
    diagnostics: Optional[dict] = None,
    threshold: Optional[float] = None,
) -> RelationReport:
    """
    Judge lhs = rhs (or lhs ≤ rhs for kind "upper_bound").

    Args:
        name: Relation name
        lhs: Left side estimate
        rhs: Right side estimate
        params: Parameter snapshot
        plan: Plan snapshot
        fd_bias: Finite-difference bias bound added to the combined error
        kind: "equality" (pass iff |z| ≤ threshold) or "upper_bound" (pass iff z ≤ threshold)
        notes: Free-form notes
        diagnostics: Extra named numbers
        threshold: z threshold; defaults to the configured one

    Returns:
        RelationReport
    """
    if threshold is None:
        threshold = get_config().lab_config.z_threshold

    if _broken(name):
        logger.warning(f"Relation '{name}' deliberately broken by IMMSE_BREAK_RELATION")
        rhs = rhs.model_copy(update={"mean": rhs.mean + BROKEN_SHIFT})

    residual = lhs.mean - rhs.mean
    combined_error = math.hypot(lhs.std_error, rhs.std_error) + fd_bias
    z = z_score(residual, combined_error)
    passed = z <= threshold if kind == "upper_bound" else abs(z) <= threshold
    notes = list(notes or [])
    if math.isinf(combined_error):
        # no error bar, no verdict
        passed = False
        n_min = min(lhs.n_samples, rhs.n_samples)
        notes.append(f"not judged: infinite error bar (n = {n_min} on one side, need n >= 2)")

    report = RelationReport(
        name=name,
        lhs=lhs,
        rhs=rhs,
        residual=residual,
        combined_error=combined_error,
        z_score=z,
        passed=passed,
        threshold=threshold,
        kind=kind,
        fd_bias=fd_bias,
        params=params,
        plan=plan,
        notes=notes,
        diagnostics=diagnostics or {},
    )

    log = logger.info if passed else logger.warning
    log(f"{name}: lhs={lhs.mean:.6g} rhs={rhs.mean:.6g} z={z:.3g} -> {'PASS' if passed else 'FAIL'}")
    return report


def fit_log_slope(l_grid: Sequence[int], residuals: Sequence[float]) -> Tuple[Optional[float], Optional[Tuple[float, float]]]:
    """
    OLS slope of ln residual on ln L with a 95% Student-t interval.

    Returns:
        (slope, (low, high)), or (None, None) if some residual is not positive
    """
    residuals = np.asarray(residuals, dtype=np.float64)
    if np.any(residuals <= 0) or len(residuals) < 3:
        return None, None

    fit = stats.linregress(np.log(np.asarray(l_grid, dtype=np.float64)), np.log(residuals))
    dof = len(residuals) - 2
    half_width = stats.t.ppf(0.975, dof) * fit.stderr
    return float(fit.slope), (float(fit.slope - half_width), float(fit.slope + half_width))


def is_monotone(points: Sequence[ScalingPoint], sigma: Optional[float] = None) -> bool:
    """r_{k+1} − r_k ≤ sigma·√(e_k² + e_{k+1}²) for every consecutive pair."""
    if sigma is None:
        sigma = get_config().analysis.monotone_sigma
    for current, following in zip(points, points[1:]):
        allowance = sigma * math.hypot(current.residual.std_error, following.residual.std_error)
        if following.residual.mean - current.residual.mean > allowance:
            return False
    return True


def final_halves_initial(points: Sequence[ScalingPoint]) -> Optional[bool]:
    """Whether the last residual is below half the first; None if the first is 0."""
    initial = points[0].residual.mean
    if initial <= 0.0:
        return None
    return points[-1].residual.mean < 0.5 * initial


def build_scaling_report(
    name: str,
    points: List[ScalingPoint],
    params: Optional[ModelParams] = None,
    plan: Optional[SamplingPlan] = None,
    notes: Optional[List[str]] = None,
) -> ScalingReport:
    """
    Decay test of a residual series over an L grid.

    Passes if the series is non-increasing within error bars or the upper
    confidence bound of the fitted log-log slope is negative.
    """
    l_grid = [point.L for point in points]
    ModelValidator.validate_l_grid(l_grid)

    slope, slope_ci = fit_log_slope(l_grid, [point.residual.mean for point in points])
    monotone = is_monotone(points)
    halved = final_halves_initial(points)
    passed = monotone or (slope_ci is not None and slope_ci[1] < 0)
    notes = list(notes or [])
    if slope is None:
        notes.append("slope not fitted: some residual is not positive")
    if halved is False:
        notes.append("final residual is not below half the initial one")

    if _broken(name):
        logger.warning(f"Relation '{name}' deliberately broken by IMMSE_BREAK_RELATION")
        passed = False

    log = logger.info if passed else logger.warning
    log(
        f"{name}: residuals {[round(p.residual.mean, 6) for p in points]} over L={l_grid}, "
        f"slope={slope}, monotone={monotone}, halved={halved} -> {'PASS' if passed else 'FAIL'}"
    )

    return ScalingReport(
        name=name,
        l_grid=l_grid,
        points=points,
        slope=slope,
        slope_ci=slope_ci,
        monotone=monotone,
        halved=halved,
        passed=passed,
        params=params,
        plan=plan,
        notes=notes,
    )
