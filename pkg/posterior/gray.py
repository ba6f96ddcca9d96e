"""
Mixed-radix reflected Gray code over K^L section configurations.

Digit l is the atom index of section l. Starting from the all-zero
configuration, each step moves the lowest digit that can still move in its
current direction by ±1 and reverses every digit below it, so consecutive
configurations differ in exactly one section.
"""

from typing import Optional, Tuple

import numpy as np
from numba import njit

from shared.config import get_config

from .exceptions import EnumerationBudgetError


def check_budget(K: int, L: int, budget: Optional[int] = None) -> int:
    """
    Number of configurations K^L, checked against the enumeration budget.

    Raises:
        EnumerationBudgetError: If K^L exceeds the budget
    """
    if K < 1 or L < 1:
        raise EnumerationBudgetError(f"need K >= 1 and L >= 1, got K={K}, L={L}")

    if budget is None:
        budget = get_config().lab_config.enumeration_budget

    n_configurations = K ** L
    if n_configurations > budget:
        raise EnumerationBudgetError(
            f"K^L = {K}^{L} = {n_configurations} exceeds the enumeration budget {budget}"
        )
    return n_configurations


@njit(cache=True, nogil=True)
def gray_advance(digits: np.ndarray, dirs: np.ndarray, K: int) -> Tuple[int, int, int]:
    """
    Move to the next configuration in place.

    Returns:
        (section, previous atom, new atom), or (-1, -1, -1) once the code is exhausted
    """
    L = digits.shape[0]
    j = 0
    while j < L:
        nxt = digits[j] + dirs[j]
        if 0 <= nxt < K:
            prev = digits[j]
            digits[j] = nxt
            return j, prev, nxt
        dirs[j] = -dirs[j]
        j += 1
    return -1, -1, -1


@njit(cache=True, nogil=True)
def _gray_transitions(K: int, L: int, n_steps: int) -> Tuple[np.ndarray, np.ndarray]:
    sections = np.empty(n_steps, dtype=np.int64)
    atoms = np.empty(n_steps, dtype=np.int64)
    digits = np.zeros(L, dtype=np.int64)
    dirs = np.ones(L, dtype=np.int64)
    for step in range(n_steps):
        section, _, atom = gray_advance(digits, dirs, K)
        sections[step] = section
        atoms[step] = atom
    return sections, atoms


def gray_schedule(K: int, L: int, budget: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Transitions of the reflected Gray walk over K^L configurations.

    Args:
        K: Number of atoms per section
        L: Number of sections
        budget: Maximum K^L; defaults to the configured enumeration budget

    Returns:
        (sections, new_atoms), two int arrays of length K^L - 1; the walk starts
        at the all-zero configuration

    Raises:
        EnumerationBudgetError: If K^L exceeds the budget
    """
    n_configurations = check_budget(K, L, budget)
    return _gray_transitions(K, L, n_configurations - 1)


def gray_configurations(K: int, L: int, budget: Optional[int] = None) -> np.ndarray:
    """All K^L configurations in Gray order, one row per configuration."""
    sections, atoms = gray_schedule(K, L, budget)
    configs = np.zeros((sections.shape[0] + 1, L), dtype=np.int64)
    for step, (section, atom) in enumerate(zip(sections, atoms)):
        configs[step + 1] = configs[step]
        configs[step + 1, section] = atom
    return configs
