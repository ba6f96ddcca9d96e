"""
Per-instance observables.

Each takes (instance, posterior summary, params) and returns one float; the
quenched expectation is the sample mean over a plan. Replica-pair brackets are
written as products of single-replica averages.
"""

import math
from typing import Optional

import numpy as np

from shared.data_models import Instance, ModelParams, PosteriorSummary


def mutual_info_term(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    """−(ln Z + realized Gaussian constants)/L."""
    constant = 0.5 * float(inst.z @ inst.z)
    if params.h > 0:
        constant += 0.5 * float(inst.zhat @ inst.zhat)
    return -(post.log_z + constant) / inst.L


def mmse_term(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    return post.section_mmse_term


def measurement_mmse_term(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    base = post.row_mean[: inst.M]
    return float(base @ base) / inst.M


def base_row_sq_term(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    return float(np.sum(post.row_sq[: inst.M])) / inst.M


def sub_measurement_term(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    sub = post.row_mean[inst.M:]
    return float(sub @ sub) / inst.sub_size


def sub_measurement_ibp_term(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    """√(Δ/t)·|S|^{-1}·Σ_ν z_ν⟨r̄_ν⟩."""
    sub = post.row_mean[inst.M:]
    return math.sqrt(params.delta / params.t) * float(inst.z[inst.M:] @ sub) / inst.sub_size


def overlap_term(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    return post.overlap_mean


def overlap_sq_term(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    return post.overlap_sq


def posterior_variance_term(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    """L^{-1}·Σ_i (⟨X_i²⟩ − ⟨X_i⟩²), the replica side of E⟨ℰ⟩."""
    return float(np.sum(post.second_moment - post.mean ** 2)) / inst.L


def row_mean_sq_twice_term(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    """2·⟨r̄_μ⟩² averaged over all rows."""
    return 2.0 * float(np.mean(post.row_mean ** 2))


def row_sq_term(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    """⟨r̄_μ²⟩ averaged over all rows."""
    return float(np.mean(post.row_sq))


def row_observable(row: int, squared: bool):
    """Single-row version of the two terms above."""

    def observable(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
        if squared:
            return float(post.row_sq[row])
        return 2.0 * float(post.row_mean[row]) ** 2

    return observable


def dt_direct_term(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    """(2ΔL)^{-1}·Σ_ν (⟨r̄_ν²⟩ − ⟨r̄_ν⟩ z_ν √(Δ/t)); needs t > 0."""
    sub_sq = post.row_sq[inst.M:]
    sub_mean = post.row_mean[inst.M:]
    z_sub = inst.z[inst.M:]
    scale = math.sqrt(params.delta / params.t)
    total = float(np.sum(sub_sq - sub_mean * z_sub * scale))
    return total / (2.0 * params.delta * inst.L)


def dt_ibp_term(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    """(2ΔL)^{-1}·Σ_ν ⟨r̄_ν⟩²."""
    sub = post.row_mean[inst.M:]
    return float(sub @ sub) / (2.0 * params.delta * inst.L)


def side_channel_slope_term(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    """Per-instance h-derivative of i_{t,h}: mmse/2 + s_max·Σ|ẑ|/(2√h·L)."""
    constant_slope = inst.s_max * float(np.sum(np.abs(inst.zhat))) / (2.0 * math.sqrt(params.h) * inst.L)
    return 0.5 * post.section_mmse_term + constant_slope


def _row_section_moments(inst: Instance, post: PosteriorSummary) -> np.ndarray:
    """⟨r̄_ν X_i⟩ for ν ∈ S, shape |S|×N."""
    atoms = inst.prior.atoms
    joint = np.einsum("vlk,kb->vlb", post.sub_row_section, atoms)
    return joint.reshape(inst.sub_size, inst.N)


def noise_weighted_terms(inst: Instance, post: PosteriorSummary, params: ModelParams):
    """
    Both sides of the z_ν-weighted Nishimori identity, summed over i and ν ∈ S, over L.

    lhs: z_ν⟨u_ν X̄_i X̄'_i⟩ = z_ν(a⟨r̄_ν X̄_i⟩ − z_ν⟨X̄_i⟩)⟨X̄_i⟩
    rhs: z_ν² s_i⟨X̄_i⟩ − a z_ν s_i⟨r̄_ν X̄_i⟩
    with a = √(t/Δ).
    """
    a = math.sqrt(params.t / params.delta)
    xbar_mean = post.mean - inst.s
    sub_mean = post.row_mean[inst.M:]
    z_sub = inst.z[inst.M:]

    row_xbar = _row_section_moments(inst, post) - np.outer(sub_mean, inst.s)

    lhs = np.sum(z_sub[:, None] * (a * row_xbar - z_sub[:, None] * xbar_mean[None, :]) * xbar_mean[None, :])
    rhs = np.sum(
        (z_sub[:, None] ** 2) * inst.s[None, :] * xbar_mean[None, :]
        - a * z_sub[:, None] * inst.s[None, :] * row_xbar
    )
    return float(lhs) / inst.L, float(rhs) / inst.L


def noise_weighted_lhs(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    return noise_weighted_terms(inst, post, params)[0]


def noise_weighted_rhs(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    return noise_weighted_terms(inst, post, params)[1]


def overlap_row_covariance(inst: Instance, post: PosteriorSummary, params: ModelParams) -> float:
    """
    Σ_ν (⟨ℰ G_ν⟩ − ⟨ℰ⟩⟨G_ν⟩) with G_ν = (r̄_ν² − r̄_ν z_ν √(Δ/t))/(2Δ); needs t > 0.

    ⟨ℰ r̄_ν⟩ comes from the section-resolved row averages, ⟨ℰ r̄_ν²⟩ is stored directly.
    """
    atoms = inst.prior.atoms
    sections = inst.s.reshape(inst.L, 1, inst.B)
    q = np.sum((atoms[None, :, :] - sections) * atoms[None, :, :], axis=2)
    overlap_row = np.einsum("vlk,lk->v", post.sub_row_section, q) / inst.L

    sub_mean = post.row_mean[inst.M:]
    sub_sq = post.row_sq[inst.M:]
    z_sub = inst.z[inst.M:]
    scale = math.sqrt(params.delta / params.t)

    cov_sq = post.sub_overlap_row_sq - post.overlap_mean * sub_sq
    cov_lin = overlap_row - post.overlap_mean * sub_mean
    return float(np.sum(cov_sq - z_sub * scale * cov_lin)) / (2.0 * params.delta)


def signal_row_moment(order: int):
    """E[(φs)_ν^{2n}] averaged over the rows of S, or all rows when S is empty."""

    def observable(inst: Instance, post: Optional[PosteriorSummary], params: ModelParams) -> float:
        rows = inst.phi[inst.M:] if inst.sub_size > 0 else inst.phi
        projections = rows @ inst.s
        return float(np.mean(projections ** (2 * order)))

    return observable
