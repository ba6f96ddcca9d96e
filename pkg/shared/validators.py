"""
Validation utilities for model inputs.

Catches malformed priors, parameters and grids before any enumeration starts.
"""

import math
from typing import Sequence

import numpy as np
from loguru import logger


class ValidationError(Exception):
    """Raised when input validation fails."""
    pass


class ModelValidator:
    """
    Validates model inputs for correctness.

    Checks:
    - Prior atoms and weights
    - Scalar model parameters
    - Grids (L grids, t grids, h windows)
    - Finite-difference steps
    """

    # Renormalization tolerance for prior weights
    WEIGHT_TOLERANCE = 1e-9

    @classmethod
    def validate_atoms(cls, atoms: np.ndarray) -> bool:
        """
        Validate the K×B atom table of a discrete prior.

        Args:
            atoms: Atom table

        Returns:
            True if valid

        Raises:
            ValidationError: If the table is empty, not 2-D or not finite
        """
        if atoms.ndim != 2:
            raise ValidationError(f"atoms must be a K×B table, got shape {atoms.shape}")

        if atoms.shape[0] < 1 or atoms.shape[1] < 1:
            raise ValidationError(f"atoms need K >= 1 and B >= 1, got shape {atoms.shape}")

        if not np.all(np.isfinite(atoms)):
            raise ValidationError("atoms must be finite")

        return True

    @classmethod
    def validate_weights(cls, weights: np.ndarray, n_atoms: int) -> bool:
        """
        Validate prior weights.

        Args:
            weights: Probability weights
            n_atoms: Number of atoms K

        Returns:
            True if valid

        Raises:
            ValidationError: If weights are negative, mis-sized or do not sum to 1
        """
        if weights.ndim != 1 or weights.shape[0] != n_atoms:
            raise ValidationError(
                f"weights must be a vector of length {n_atoms}, got shape {weights.shape}"
            )

        if not np.all(np.isfinite(weights)):
            raise ValidationError("weights must be finite")

        if np.any(weights < 0):
            raise ValidationError(f"weights cannot be negative: {weights.tolist()}")

        deviation = abs(float(weights.sum()) - 1.0)
        if deviation > cls.WEIGHT_TOLERANCE:
            raise ValidationError(
                f"weights sum to {float(weights.sum())!r}, deviation {deviation:.3e} "
                f"exceeds {cls.WEIGHT_TOLERANCE}"
            )

        return True

    @classmethod
    def validate_l_grid(cls, l_grid: Sequence[int]) -> bool:
        """
        Validate an L grid for scaling runs.

        Raises:
            ValidationError: If the grid is too short or not strictly increasing
        """
        if len(l_grid) < 3:
            raise ValidationError(f"L grid needs at least 3 points, got {list(l_grid)}")

        if any(int(v) < 1 for v in l_grid):
            raise ValidationError(f"L grid entries must be >= 1: {list(l_grid)}")

        if any(b <= a for a, b in zip(l_grid, l_grid[1:])):
            raise ValidationError(f"L grid must be strictly increasing: {list(l_grid)}")

        return True

    @classmethod
    def validate_t_grid(cls, t_grid: Sequence[float]) -> bool:
        """
        Validate an interpolation grid over [0, 1].

        Raises:
            ValidationError: If the grid misses an endpoint or is not increasing
        """
        if len(t_grid) < 2:
            raise ValidationError("t grid needs at least the two endpoints")

        if not math.isclose(t_grid[0], 0.0, abs_tol=1e-15) or not math.isclose(
            t_grid[-1], 1.0, abs_tol=1e-15
        ):
            raise ValidationError(f"t grid must start at 0 and end at 1: {list(t_grid)}")

        if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
            raise ValidationError("t grid must be strictly increasing")

        if len(t_grid) < 5:
            logger.warning(f"t grid has only {len(t_grid)} points; quadrature will be coarse")

        return True

    @classmethod
    def validate_h_window(cls, low: float, high: float) -> bool:
        """
        Validate a side-channel snr window [a, eps].

        Raises:
            ValidationError: Unless 0 < a < eps
        """
        if not (0 < low < high):
            raise ValidationError(f"h window must satisfy 0 < a < eps, got [{low}, {high}]")

        return True

    @classmethod
    def validate_step(cls, step: float, center: float, name: str, lower: float = 0.0) -> bool:
        """
        Validate a central finite-difference step around center.

        Raises:
            ValidationError: If the step is not positive or crosses the lower bound
        """
        if not step > 0:
            raise ValidationError(f"{name} step must be positive, got {step}")

        if center - step <= lower:
            raise ValidationError(
                f"{name} - step = {center - step} must stay above {lower}"
            )

        return True
