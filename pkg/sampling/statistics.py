"""
Deterministic reductions over per-instance values.

Sums are taken as a balanced pairwise tree over sample indices, so results do
not depend on how instances were scheduled across workers.
"""

import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from shared.config import get_config
from shared.data_models import EstimateWithError, SamplingPlan
from shared.validators import ValidationError


def tree_sum(values: Sequence[float]) -> float:
    """Balanced pairwise sum in index order."""
    level = np.asarray(values, dtype=np.float64)
    if level.size == 0:
        return 0.0
    while level.size > 1:
        paired = level[: level.size - level.size % 2]
        reduced = paired[0::2] + paired[1::2]
        if level.size % 2:
            reduced = np.append(reduced, level[-1])
        level = reduced
    return float(level[0])


def sample_mean(values: Sequence[float]) -> float:
    values = np.asarray(values, dtype=np.float64)
    return tree_sum(values) / values.size


def standard_error(values: Sequence[float]) -> float:
    """
    Sample standard deviation (ddof=1) over √n.

    Infinite for a single sample, since no spread can be measured.
    """
    values = np.asarray(values, dtype=np.float64)
    n = values.size
    if n < 2:
        return math.inf
    mean = tree_sum(values) / n
    variance = tree_sum((values - mean) ** 2) / (n - 1)
    return math.sqrt(variance / n)


def estimate(values: Sequence[float], plan: Optional[SamplingPlan] = None) -> EstimateWithError:
    """
    Monte Carlo estimate of the mean of per-instance values.

    Args:
        values: One value per instance, in index order
        plan: Plan that produced the values (recorded on the estimate)

    Returns:
        EstimateWithError

    Raises:
        ValidationError: If there are no values or some are not finite
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValidationError("cannot estimate from zero samples")
    if not np.all(np.isfinite(values)):
        raise ValidationError("per-instance values must be finite")

    return EstimateWithError(
        mean=sample_mean(values),
        std_error=standard_error(values),
        n_samples=int(values.size),
        base_seed=plan.base_seed if plan else None,
        crn_tag=plan.crn_tag if plan else None,
    )


def scaled(est: EstimateWithError, factor: float, offset: float = 0.0) -> EstimateWithError:
    """Affine image factor·X + offset of an estimate."""
    return est.model_copy(
        update={"mean": factor * est.mean + offset, "std_error": abs(factor) * est.std_error}
    )


def transformed(est: EstimateWithError, value: float, derivative: float) -> EstimateWithError:
    """Delta-method image f(X): mean f(mean), error |f'(mean)|·std_error."""
    return est.model_copy(update={"mean": value, "std_error": abs(derivative) * est.std_error})


def absolute_difference(lhs: EstimateWithError, rhs: EstimateWithError) -> EstimateWithError:
    """|lhs − rhs| with the conservative combined error."""
    return EstimateWithError(
        mean=abs(lhs.mean - rhs.mean),
        std_error=math.hypot(lhs.std_error, rhs.std_error),
        n_samples=min(lhs.n_samples, rhs.n_samples),
        base_seed=lhs.base_seed,
        crn_tag=lhs.crn_tag,
    )


def trapezoid_weights(grid: Sequence[float]) -> np.ndarray:
    """Weights w with Σ w_j f(x_j) the trapezoid rule on a sorted grid."""
    grid = np.asarray(grid, dtype=np.float64)
    weights = np.zeros_like(grid)
    gaps = np.diff(grid)
    weights[:-1] += gaps / 2
    weights[1:] += gaps / 2
    return weights


def central_difference(
    values_at: Callable[[float], np.ndarray],
    center: float,
    step: float,
    plan: Optional[SamplingPlan] = None,
) -> Tuple[EstimateWithError, float]:
    """
    Paired central difference of a per-instance observable.

    Both evaluations use the same instances, so the estimate is the mean of the
    per-instance slopes. The bias bound comes from step halving:
    (4/3)·|D(δ) − D(δ/2)|.

    Args:
        values_at: Per-instance values at a parameter value
        center: Point of differentiation
        step: Step δ
        plan: Plan recorded on the estimate

    Returns:
        (slope estimate at step δ, bias bound)
    """
    slopes = (values_at(center + step) - values_at(center - step)) / (2.0 * step)
    half = step / 2.0
    half_slopes = (values_at(center + half) - values_at(center - half)) / (2.0 * half)

    fd_bias = (4.0 / 3.0) * abs(sample_mean(slopes - half_slopes))
    return estimate(slopes, plan), fd_bias


def default_step(center: float) -> float:
    """Default finite-difference step, a fixed fraction of the parameter."""
    return get_config().analysis.fd_fraction * abs(center)
