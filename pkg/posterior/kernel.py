"""
Gray-walk enumeration kernel.

One pass over all configurations in Gray order. The row residuals
r̄ = φ(x − s) are updated in O(R) per step from per-section contribution
tables; log-weights go through a streaming log-sum-exp with running-max
rescaling, and every Gibbs moment is a Kahan-compensated accumulator in a
single flat array:

    [Z, ℰ, ℰ², r̄ (R), r̄² (R), 1{x_l=a_k} (L·K),
     r̄_ν·1{x_l=a_k} (|S|·L·K), ℰ·r̄_ν² (|S|)]

with ν running over the last |S| rows.
"""

import math

import numpy as np
from numba import njit

from .gray import gray_advance

TOTAL = 0
OVERLAP = 1
OVERLAP_SQ = 2
ROWS = 3


def accumulator_layout(R: int, L: int, K: int, n_sub: int) -> dict:
    """Offsets of each block in the flat accumulator."""
    marginals = ROWS + 2 * R
    sub_section = marginals + L * K
    sub_overlap = sub_section + n_sub * L * K
    return {
        "rows": ROWS,
        "rows_sq": ROWS + R,
        "marginals": marginals,
        "sub_row_section": sub_section,
        "sub_overlap_row_sq": sub_overlap,
        "size": sub_overlap + n_sub,
    }


@njit(cache=True, nogil=True)
def _kahan_add(acc, comp, i, value):
    y = value - comp[i]
    t = acc[i] + y
    comp[i] = (t - acc[i]) - y
    acc[i] = t


@njit(cache=True, nogil=True)
def _quadratic(rbar, row_w, row_sqrt_w, z):
    total = 0.0
    for r in range(rbar.shape[0]):
        total += 0.5 * row_w[r] * rbar[r] * rbar[r] - row_sqrt_w[r] * z[r] * rbar[r]
    return total


@njit(cache=True, nogil=True)
def enumerate_kernel(contrib, rbar0, row_w, row_sqrt_w, z, side, logp, q, n_sub, constant):
    """
    Walk all K^L configurations and accumulate rescaled Gibbs sums.

    Args:
        contrib: (L, K, R) table, contrib[l, k] = φ_{·,l} a_k
        rbar0: Residuals φ(x − s) at the all-zero configuration
        row_w: Per-row snr
        row_sqrt_w: Square roots of row_w
        z: Row noises
        side: (L, K) side-channel energy of atom k in section l
        logp: (K,) log prior weights
        q: (L, K) overlap contribution Σ_b (a_kb − s_lb)·a_kb
        n_sub: Number of trailing rows forming S
        constant: x-independent energy

    Returns:
        (acc, running max log-weight, finite flag)
    """
    L = contrib.shape[0]
    K = contrib.shape[1]
    R = contrib.shape[2]

    off_rows_sq = ROWS + R
    off_marg = ROWS + 2 * R
    off_sub = off_marg + L * K
    off_sub_sq = off_sub + n_sub * L * K
    size = off_sub_sq + n_sub

    acc = np.zeros(size)
    comp = np.zeros(size)

    digits = np.zeros(L, dtype=np.int64)
    dirs = np.ones(L, dtype=np.int64)
    rbar = rbar0.copy()

    logp_sum = 0.0
    side_sum = 0.0
    q_sum = 0.0
    for l in range(L):
        logp_sum += logp[0]
        side_sum += side[l, 0]
        q_sum += q[l, 0]

    m = -np.inf
    while True:
        energy = _quadratic(rbar, row_w, row_sqrt_w, z) + side_sum + constant
        if not np.isfinite(energy):
            return acc, m, False

        logw = logp_sum - energy
        if logw > m:
            if m > -np.inf:
                scale = math.exp(m - logw)
                for i in range(size):
                    acc[i] *= scale
                    comp[i] *= scale
            m = logw
        wt = math.exp(logw - m)

        overlap = q_sum / L
        _kahan_add(acc, comp, TOTAL, wt)
        _kahan_add(acc, comp, OVERLAP, wt * overlap)
        _kahan_add(acc, comp, OVERLAP_SQ, wt * overlap * overlap)
        for r in range(R):
            _kahan_add(acc, comp, ROWS + r, wt * rbar[r])
            _kahan_add(acc, comp, off_rows_sq + r, wt * rbar[r] * rbar[r])
        for l in range(L):
            _kahan_add(acc, comp, off_marg + l * K + digits[l], wt)
        for nu in range(n_sub):
            r = R - n_sub + nu
            weighted_row = wt * rbar[r]
            for l in range(L):
                _kahan_add(acc, comp, off_sub + (nu * L + l) * K + digits[l], weighted_row)
            _kahan_add(acc, comp, off_sub_sq + nu, weighted_row * rbar[r] * overlap)

        section, prev, atom = gray_advance(digits, dirs, K)
        if section < 0:
            break
        for r in range(R):
            rbar[r] += contrib[section, atom, r] - contrib[section, prev, r]
        logp_sum += logp[atom] - logp[prev]
        side_sum += side[section, atom] - side[section, prev]
        q_sum += q[section, atom] - q[section, prev]

    return acc, m, True


@njit(cache=True, nogil=True)
def walk_energies(contrib, rbar0, row_w, row_sqrt_w, z, side, constant):
    """Energies of every configuration in Gray order, computed incrementally."""
    L = contrib.shape[0]
    K = contrib.shape[1]
    R = contrib.shape[2]
    n_configurations = K ** L

    energies = np.empty(n_configurations)
    digits = np.zeros(L, dtype=np.int64)
    dirs = np.ones(L, dtype=np.int64)
    rbar = rbar0.copy()
    side_sum = 0.0
    for l in range(L):
        side_sum += side[l, 0]

    for step in range(n_configurations):
        energies[step] = _quadratic(rbar, row_w, row_sqrt_w, z) + side_sum + constant
        if step == n_configurations - 1:
            break
        section, prev, atom = gray_advance(digits, dirs, K)
        for r in range(R):
            rbar[r] += contrib[section, atom, r] - contrib[section, prev, r]
        side_sum += side[section, atom] - side[section, prev]

    return energies
