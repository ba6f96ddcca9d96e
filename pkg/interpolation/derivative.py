"""
t-derivative of the interpolated mutual information.

Three estimates on one plan:
- direct: Gibbs average of ∂_t H over the rows of S (needs t > 0)
- ibp: the integrated-by-parts form (2ΔL)^{-1}·Σ_ν E⟨r̄_ν⟩²
- finite difference of i_{t,h} in t, paired over instances
"""

from typing import Optional

from loguru import logger

from sampling import observables
from sampling.sampler import get_sampler
from sampling.statistics import central_difference
from shared.data_models import DtDerivative, ModelParams, Prior, SamplingPlan
from shared.validators import ValidationError


def dt_derivative(
    params: ModelParams,
    prior: Prior,
    plan: SamplingPlan,
    fd_step: Optional[float] = None,
    direct: bool = True,
) -> DtDerivative:
    """
    Estimate di_{t,h}/dt.

    Args:
        params: Model parameters at the point of differentiation
        prior: Section prior
        plan: Sampling plan shared by every estimate
        fd_step: Step of the finite difference in t; skipped if None
        direct: Whether to compute the direct (Gibbs) form

    Returns:
        DtDerivative

    Raises:
        ValidationError: If |S| = 0, if the direct form is requested at t = 0,
            or if t ± fd_step leaves [0, 1]
    """
    if params.S == 0:
        raise ValidationError("the t-derivative needs |S| >= 1")
    if direct and params.t == 0:
        raise ValidationError("the direct t-derivative form is singular at t = 0")

    sampler = get_sampler()
    sample_set = sampler.run(params, prior, plan)

    direct_est = sample_set.estimate(observables.dt_direct_term) if direct else None
    ibp_est = sample_set.estimate(observables.dt_ibp_term)

    fd_est = None
    fd_bias = 0.0
    if fd_step is not None:
        if not fd_step > 0 or params.t - fd_step < 0 or params.t + fd_step > 1:
            raise ValidationError(
                f"t ± step must stay within [0, 1], got t={params.t}, step={fd_step}"
            )

        def values_at(t: float):
            return sampler.run(params.with_updates(t=t), prior, plan).values(
                observables.mutual_info_term
            )

        fd_est, fd_bias = central_difference(values_at, params.t, fd_step, plan)

    logger.debug(
        f"dt derivative at t={params.t}: direct={direct_est.mean if direct_est else None}, "
        f"ibp={ibp_est.mean}, fd={fd_est.mean if fd_est else None}"
    )

    return DtDerivative(
        t=params.t,
        direct=direct_est,
        ibp=ibp_est,
        finite_difference=fd_est,
        fd_bias=fd_bias,
        fd_step=fd_step,
    )
