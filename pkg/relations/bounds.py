"""Uniform-in-L moment bounds on the projected signal."""

from typing import List

from scipy.special import factorial2

from sampling import observables
from sampling.sampler import get_sampler
from shared.data_models import EstimateWithError, ModelParams, Prior, RelationReport, SamplingPlan
from shared.validators import ValidationError

from .reports import build_relation_report


def check_moment_bounds(
    params: ModelParams,
    prior: Prior,
    plan: SamplingPlan,
    max_order: int = 4,
) -> List[RelationReport]:
    """
    E[(φs)_ν^{2n}] ≤ (2n−1)!!·(B·s_max²)^n for n = 1..max_order.

    Given s, (φs)_ν is Gaussian with variance ||s||²/L ≤ B·s_max². Rows of S
    are used, or all rows when S is empty. No enumeration is needed.

    Raises:
        ValidationError: If max_order < 1 or the instance has no rows
    """
    if max_order < 1:
        raise ValidationError(f"max_order must be >= 1, got {max_order}")
    if params.n_rows == 0:
        raise ValidationError("moment bounds need at least one measurement row")

    sample_set = get_sampler().draw(params, prior, plan)
    variance_bound = params.B * prior.s_max ** 2

    reports = []
    for order in range(1, max_order + 1):
        bound = float(factorial2(2 * order - 1, exact=True)) * variance_bound ** order
        reports.append(
            build_relation_report(
                f"moment_bounds[n={order}]",
                sample_set.estimate(observables.signal_row_moment(order)),
                EstimateWithError(mean=bound, std_error=0.0, n_samples=plan.n_samples),
                params=params,
                plan=plan,
                kind="upper_bound",
            )
        )
    return reports
