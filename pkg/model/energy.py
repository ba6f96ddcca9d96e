"""
Hamiltonians of the RLE posterior.

All energies are evaluated in their expanded quadratic forms, so t = 0 and
h = 0 are regular points (no z√(Δ/t) or ẑ/√h is ever formed).
"""

import math

import numpy as np

from shared.data_models import Instance, ModelParams
from shared.validators import ValidationError


def _as_configuration(x: np.ndarray, inst: Instance) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (inst.N,):
        raise ValidationError(f"configuration has shape {x.shape}, expected ({inst.N},)")
    if not np.all(np.isfinite(x)):
        raise ValidationError("configuration must be finite")
    return x


def _check_layout(inst: Instance, params: ModelParams) -> None:
    if inst.M != params.M or inst.sub_size != params.S or inst.N != params.N:
        raise ValidationError(
            f"instance layout (M={inst.M}, |S|={inst.sub_size}, N={inst.N}) does not match "
            f"params (M={params.M}, |S|={params.S}, N={params.N})"
        )


def row_weights(inst: Instance, params: ModelParams) -> np.ndarray:
    """Per-row snr: 1/Δ on the base rows, t/Δ on the rows of S."""
    weights = np.full(inst.n_rows, 1.0 / params.delta)
    weights[inst.M:] = params.t / params.delta
    return weights


def energy_constant(inst: Instance, params: ModelParams) -> float:
    """The x-independent part of H_{t,h}."""
    constant = 0.5 * float(inst.z @ inst.z)
    if params.h > 0:
        constant += 0.5 * float(inst.zhat @ inst.zhat)
        constant += math.sqrt(params.h) * inst.s_max * float(np.sum(np.abs(inst.zhat)))
    return constant


def base_energy(x: np.ndarray, inst: Instance, delta: float) -> float:
    """
    Exponent of the RLE posterior over the M base rows.

    (1/2Δ)·Σ_{μ≤M} ([φx̄]_μ − z_μ√Δ)² with x̄ = x − s.

    Raises:
        ValidationError: On a dimension mismatch
    """
    x = _as_configuration(x, inst)
    if not delta > 0:
        raise ValidationError(f"delta must be positive, got {delta}")

    residual = inst.phi[: inst.M] @ (x - inst.s) - inst.z[: inst.M] * math.sqrt(delta)
    return float(residual @ residual) / (2.0 * delta)


def interp_energy(x: np.ndarray, inst: Instance, params: ModelParams) -> float:
    """
    Interpolated perturbed Hamiltonian H_{t,h}(x; y).

    Side channel (h/2)x̄² − √h·x̄ẑ + ẑ²/2 plus √h·s_max·Σ|ẑ| when h > 0, the base
    rows, and the rows of S weighted by t.

    Raises:
        ValidationError: On a dimension or layout mismatch
    """
    x = _as_configuration(x, inst)
    _check_layout(inst, params)

    xbar = x - inst.s
    rows = inst.phi @ xbar
    weights = row_weights(inst, params)

    energy = float(np.sum(0.5 * weights * rows ** 2 - np.sqrt(weights) * inst.z * rows))
    if params.h > 0:
        energy += float(
            np.sum(0.5 * params.h * xbar ** 2 - math.sqrt(params.h) * xbar * inst.zhat)
        )
    return energy + energy_constant(inst, params)
