"""
Nishimori identities.

Every bracket over two replicas factorizes into single-replica averages, so
all four identities are computed from one enumerated plan.
"""

from typing import List

from sampling import observables
from sampling.sampler import get_sampler
from shared.data_models import ModelParams, Prior, RelationReport, SamplingPlan
from shared.validators import ValidationError

from .reports import build_relation_report


def nishimori_suite(
    prior: Prior,
    params: ModelParams,
    plan: SamplingPlan,
    per_row: bool = False,
    include_noise_weighted: bool = True,
) -> List[RelationReport]:
    """
    Signal-replica vs replica-replica identities.

    - nishimori_overlap: E⟨ℰ⟩ = L^{-1}·Σ_i E[⟨X_i²⟩ − ⟨X_i⟩²]
    - nishimori_row_identity: 2E⟨r̄_μ⟩² = E⟨r̄_μ²⟩, averaged over rows
      (one report per row as well with per_row)
    - nishimori_overlap_mmse: E⟨ℰ⟩ = E_{t,h}
    - nishimori_noise_weighted: E[z_ν⟨u_ν X̄_i X̄'_i⟩] = E[z_ν² s_i⟨X̄_i⟩] − √(t/Δ)·E[z_ν s_i⟨r̄_ν X̄_i⟩]

    Raises:
        ValidationError: If the instance has no rows, or the noise-weighted
            identity is requested at t = 0 or |S| = 0
    """
    if params.n_rows == 0:
        raise ValidationError("the Nishimori suite needs at least one measurement row")
    if include_noise_weighted and (params.t == 0 or params.S == 0):
        raise ValidationError("the noise-weighted identity needs t > 0 and |S| >= 1")

    sample_set = get_sampler().run(params, prior, plan)
    overlap = sample_set.estimate(observables.overlap_term)

    reports = [
        build_relation_report(
            "nishimori_overlap",
            overlap,
            sample_set.estimate(observables.posterior_variance_term),
            params=params,
            plan=plan,
        ),
        build_relation_report(
            "nishimori_row_identity",
            sample_set.estimate(observables.row_mean_sq_twice_term),
            sample_set.estimate(observables.row_sq_term),
            params=params,
            plan=plan,
        ),
    ]

    if per_row:
        for row in range(params.n_rows):
            reports.append(
                build_relation_report(
                    f"nishimori_row_identity[{row}]",
                    sample_set.estimate(observables.row_observable(row, squared=False)),
                    sample_set.estimate(observables.row_observable(row, squared=True)),
                    params=params,
                    plan=plan,
                )
            )

    reports.append(
        build_relation_report(
            "nishimori_overlap_mmse",
            overlap,
            sample_set.estimate(observables.mmse_term),
            params=params,
            plan=plan,
        )
    )

    if include_noise_weighted:
        reports.append(
            build_relation_report(
                "nishimori_noise_weighted",
                sample_set.estimate(observables.noise_weighted_lhs),
                sample_set.estimate(observables.noise_weighted_rhs),
                params=params,
                plan=plan,
                notes=["summed over i and ν ∈ S, divided by L"],
            )
        )

    return reports


def check_sub_measurement_ibp(
    params: ModelParams,
    prior: Prior,
    plan: SamplingPlan,
) -> RelationReport:
    """
    Y^{(S)}_{t,h} = √(Δ/t)·|S|^{-1}·Σ_ν E[z_ν⟨r̄_ν⟩].

    Raises:
        ValidationError: If t = 0 or |S| = 0
    """
    if params.t == 0 or params.S == 0:
        raise ValidationError("the integration-by-parts form needs t > 0 and |S| >= 1")

    sample_set = get_sampler().run(params, prior, plan)
    return build_relation_report(
        "sub_measurement_ibp",
        sample_set.estimate(observables.sub_measurement_term),
        sample_set.estimate(observables.sub_measurement_ibp_term),
        params=params,
        plan=plan,
    )
