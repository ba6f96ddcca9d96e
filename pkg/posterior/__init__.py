"""
Exact-posterior package - exhaustive enumeration of section configurations.

Components:
- Mixed-radix reflected Gray code
- numba Gray-walk kernel with streaming log-sum-exp
- PosteriorSummary construction
"""

from .enumerate import enumerate_posterior, incremental_energies
from .exceptions import EnumerationBudgetError, NonFiniteEnergyError
from .gray import gray_configurations, gray_schedule

__all__ = [
    "enumerate_posterior",
    "incremental_energies",
    "EnumerationBudgetError",
    "NonFiniteEnergyError",
    "gray_configurations",
    "gray_schedule",
]
