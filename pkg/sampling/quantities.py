"""
Macroscopic quantities as quenched Monte Carlo estimates.

Each function runs (or reuses) the plan's sample set through the global
sampler and averages one per-instance observable.
"""

from typing import Tuple

import numpy as np

from shared.data_models import EstimateWithError, ModelParams, Prior, SamplingPlan
from shared.validators import ValidationError

from . import observables
from .sampler import get_sampler
from .statistics import estimate, sample_mean


def mutual_info(params: ModelParams, prior: Prior, plan: SamplingPlan) -> EstimateWithError:
    """
    Mutual information per section i_{t,h}.

    For the base model (t = h = 0) the S rows carry no weight and their
    constants cancel, so this is i_L.
    """
    return get_sampler().run(params, prior, plan).estimate(observables.mutual_info_term)


def mmse(params: ModelParams, prior: Prior, plan: SamplingPlan) -> EstimateWithError:
    """MMSE per section, (1/L)·E||S − ⟨X⟩||²."""
    return get_sampler().run(params, prior, plan).estimate(observables.mmse_term)


def measurement_mmse(params: ModelParams, prior: Prior, plan: SamplingPlan) -> EstimateWithError:
    """
    Measurement MMSE over the M base rows.

    Raises:
        ValidationError: If M = 0
    """
    if params.M == 0:
        raise ValidationError("measurement MMSE needs M >= 1")
    return get_sampler().run(params, prior, plan).estimate(observables.measurement_mmse_term)


def sub_measurement_mmse(params: ModelParams, prior: Prior, plan: SamplingPlan) -> EstimateWithError:
    """
    Measurement MMSE over the rows of S, normalized by the realized |S|.

    Raises:
        ValidationError: If |S| = 0
    """
    if params.S == 0:
        raise ValidationError("sub-measurement MMSE needs |S| >= 1")
    return get_sampler().run(params, prior, plan).estimate(observables.sub_measurement_term)


def overlap_fluctuation_values(params: ModelParams, prior: Prior, plan: SamplingPlan) -> np.ndarray:
    """
    Per-instance ⟨ℰ²⟩ − 2Ê⟨ℰ⟩ + Ê² with Ê the plan's own MMSE estimate.

    The plug-in centering biases the mean by O(1/n).
    """
    sample_set = get_sampler().run(params, prior, plan)
    center = sample_mean(sample_set.values(observables.mmse_term))
    overlap = sample_set.values(observables.overlap_term)
    overlap_sq = sample_set.values(observables.overlap_sq_term)
    return overlap_sq - 2.0 * center * overlap + center ** 2


def overlap_stats(
    params: ModelParams,
    prior: Prior,
    plan: SamplingPlan,
) -> Tuple[EstimateWithError, EstimateWithError]:
    """
    E⟨ℰ⟩ and E⟨δℰ²⟩ with δℰ = ℰ − E_{t,h}.

    Returns:
        (overlap estimate, fluctuation estimate)
    """
    overlap = get_sampler().run(params, prior, plan).estimate(observables.overlap_term)
    fluctuation = estimate(overlap_fluctuation_values(params, prior, plan), plan)
    return overlap, fluctuation


QUANTITIES = {
    "mutual_info": mutual_info,
    "mmse": mmse,
    "measurement_mmse": measurement_mmse,
    "sub_measurement_mmse": sub_measurement_mmse,
    "overlap": lambda params, prior, plan: overlap_stats(params, prior, plan)[0],
    "overlap_fluctuation": lambda params, prior, plan: overlap_stats(params, prior, plan)[1],
}
