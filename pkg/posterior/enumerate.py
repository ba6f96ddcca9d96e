"""
Exact posterior of one quenched instance.

Enumerates the support of the prior on every section, K^L configurations,
under the weight P_0(x)·exp(−H_{t,h}(x; y)).
"""

import math
from typing import Optional

import numpy as np
from loguru import logger

from model.energy import energy_constant, row_weights
from shared.data_models import Instance, ModelParams, PosteriorSummary
from shared.validators import ValidationError

from .exceptions import EnumerationBudgetError, NonFiniteEnergyError
from .gray import check_budget
from .kernel import OVERLAP, OVERLAP_SQ, TOTAL, accumulator_layout, enumerate_kernel, walk_energies

__all__ = [
    "EnumerationBudgetError",
    "NonFiniteEnergyError",
    "KernelTables",
    "enumerate_posterior",
    "incremental_energies",
]


class KernelTables:
    """Per-instance lookup tables consumed by the enumeration kernel."""

    def __init__(self, inst: Instance, params: ModelParams):
        if inst.M != params.M or inst.sub_size != params.S or inst.N != params.N:
            raise ValidationError(
                f"instance layout (M={inst.M}, |S|={inst.sub_size}, N={inst.N}) does not "
                f"match params (M={params.M}, |S|={params.S}, N={params.N})"
            )

        prior = inst.prior
        self.support = prior.support
        atoms = prior.atoms[self.support]
        self.atoms = atoms
        self.L = inst.L
        self.K = int(self.support.shape[0])
        self.B = prior.B
        self.n_sub = inst.sub_size

        phi_sections = inst.phi.reshape(inst.n_rows, self.L, self.B)
        signal_sections = inst.s.reshape(self.L, 1, self.B)
        diff = atoms[None, :, :] - signal_sections

        self.contrib = np.ascontiguousarray(np.einsum("rlb,kb->lkr", phi_sections, atoms))
        start = np.tile(atoms[0], self.L)
        self.rbar0 = inst.phi @ (start - inst.s)

        self.row_w = row_weights(inst, params)
        self.row_sqrt_w = np.sqrt(self.row_w)
        self.z = np.array(inst.z, dtype=np.float64)

        if params.h > 0:
            zhat_sections = inst.zhat.reshape(self.L, 1, self.B)
            self.side = np.sum(
                0.5 * params.h * diff ** 2 - math.sqrt(params.h) * diff * zhat_sections, axis=2
            )
        else:
            self.side = np.zeros((self.L, self.K))

        self.logp = np.log(prior.weights[self.support])
        self.q = np.sum(diff * atoms[None, :, :], axis=2)
        self.constant = energy_constant(inst, params)


def enumerate_posterior(
    inst: Instance,
    params: ModelParams,
    budget: Optional[int] = None,
) -> PosteriorSummary:
    """
    Exact Gibbs quantities of H_{t,h} for one instance.

    Args:
        inst: Quenched instance
        params: Model parameters (t, h, Δ select the Hamiltonian)
        budget: Maximum number of weighted states; defaults to the configured budget

    Returns:
        PosteriorSummary

    Raises:
        EnumerationBudgetError: If K^L exceeds the budget
        NonFiniteEnergyError: If some configuration has a non-finite energy
        ValidationError: If the instance does not match params
    """
    tables = KernelTables(inst, params)
    n_configurations = check_budget(tables.K, tables.L, budget)

    acc, log_max, finite = enumerate_kernel(
        tables.contrib,
        tables.rbar0,
        tables.row_w,
        tables.row_sqrt_w,
        tables.z,
        tables.side,
        tables.logp,
        tables.q,
        tables.n_sub,
        tables.constant,
    )
    if not finite:
        raise NonFiniteEnergyError(
            f"non-finite energy for instance {inst.key.index} at delta={params.delta}, "
            f"t={params.t}, h={params.h}"
        )

    return _summarize(acc, log_max, tables, inst, n_configurations)


def _summarize(
    acc: np.ndarray,
    log_max: float,
    tables: KernelTables,
    inst: Instance,
    n_configurations: int,
) -> PosteriorSummary:
    R = inst.n_rows
    L, K, B = tables.L, tables.K, tables.B
    n_sub = tables.n_sub
    layout = accumulator_layout(R, L, K, n_sub)

    total = acc[TOTAL]
    log_z = log_max + math.log(total)
    if not math.isfinite(log_z):
        raise NonFiniteEnergyError(f"log partition is not finite for instance {inst.key.index}")

    averages = acc / total

    support_marginals = averages[layout["marginals"]: layout["sub_row_section"]].reshape(L, K)
    mean = (support_marginals @ tables.atoms).reshape(-1)
    second_moment = (support_marginals @ tables.atoms ** 2).reshape(-1)

    K_full = inst.prior.K
    marginals = np.zeros((L, K_full))
    marginals[:, tables.support] = support_marginals

    sub_row_section = np.zeros((n_sub, L, K_full))
    sub_row_section[:, :, tables.support] = averages[
        layout["sub_row_section"]: layout["sub_overlap_row_sq"]
    ].reshape(n_sub, L, K)

    error = inst.s - mean
    section_mmse_term = float(error @ error) / L

    logger.debug(f"Enumerated {n_configurations} configurations, log Z = {log_z:.6f}")

    return PosteriorSummary(
        log_z=log_z,
        mean=mean,
        second_moment=second_moment,
        overlap_mean=float(averages[OVERLAP]),
        overlap_sq=float(averages[OVERLAP_SQ]),
        row_mean=averages[layout["rows"]: layout["rows_sq"]].copy(),
        row_sq=averages[layout["rows_sq"]: layout["marginals"]].copy(),
        section_mmse_term=section_mmse_term,
        marginals=marginals,
        sub_row_section=sub_row_section,
        sub_overlap_row_sq=averages[layout["sub_overlap_row_sq"]: layout["size"]].copy(),
        n_configurations=n_configurations,
    )


def incremental_energies(inst: Instance, params: ModelParams, budget: Optional[int] = None) -> np.ndarray:
    """
    Energies of all configurations in Gray order, as the kernel updates them.

    Configurations follow posterior.gray.gray_configurations over the support atoms.
    """
    tables = KernelTables(inst, params)
    check_budget(tables.K, tables.L, budget)
    return walk_energies(
        tables.contrib,
        tables.rbar0,
        tables.row_w,
        tables.row_sqrt_w,
        tables.z,
        tables.side,
        tables.constant,
    )
