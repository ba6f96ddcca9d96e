"""
Discrete section priors.

A prior is K atoms a_k ∈ R^B with weights p_k; sections of the signal are
drawn iid from it.
"""

from typing import Sequence

import numpy as np
from loguru import logger

from shared.data_models import Prior
from shared.validators import ModelValidator, ValidationError


def make_prior(atoms: Sequence[Sequence[float]], weights: Sequence[float]) -> Prior:
    """
    Build a validated, normalized prior.

    Args:
        atoms: K×B table of section values
        weights: K probabilities

    Returns:
        Prior with s_max = max |a_{k,j}|

    Raises:
        ValidationError: On non-finite atoms, negative weights, or a weight sum
            that deviates from 1 by more than 1e-9
    """
    try:
        atom_table = np.array(atoms, dtype=np.float64)
        weight_vec = np.array(weights, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"prior atoms/weights are not numeric tables: {e}")

    if atom_table.ndim == 1:
        atom_table = atom_table[:, None]

    ModelValidator.validate_atoms(atom_table)
    ModelValidator.validate_weights(weight_vec, atom_table.shape[0])

    total = float(weight_vec.sum())
    if total != 1.0:
        logger.debug(f"Renormalizing prior weights (sum {total!r})")
        weight_vec = weight_vec / total

    atom_table.setflags(write=False)
    weight_vec.setflags(write=False)

    return Prior(
        atoms=atom_table,
        weights=weight_vec,
        s_max=float(np.max(np.abs(atom_table))),
    )


def binary_prior() -> Prior:
    """The default prior: B = 1, atoms ±1, equiprobable."""
    return make_prior([[1.0], [-1.0]], [0.5, 0.5])
