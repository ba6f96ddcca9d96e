"""
Tests for the mixed-radix reflected Gray code.
"""

import numpy as np
import pytest

from posterior.exceptions import EnumerationBudgetError
from posterior.gray import check_budget, gray_configurations, gray_schedule
from shared.config import init_config
from shared.validators import ValidationError


def test_binary_two_sections():
    """K = 2, L = 2 visits 00, 01, 11, 10 (digit 0 written last)."""
    configs = gray_configurations(2, 2)

    # Rows are (x_0, x_1); reading x_1 x_0 gives 00, 01, 11, 10
    assert configs.tolist() == [[0, 0], [1, 0], [1, 1], [0, 1]]


def test_single_atom_has_no_transitions():
    """K = 1 gives one configuration and an empty transition list."""
    sections, atoms = gray_schedule(1, 5)

    assert sections.shape == (0,)
    assert atoms.shape == (0,)
    assert gray_configurations(1, 5).tolist() == [[0, 0, 0, 0, 0]]


def test_ternary_two_sections():
    """K = 3, L = 2 gives 9 configurations and 8 single-section moves."""
    sections, atoms = gray_schedule(3, 2)
    configs = gray_configurations(3, 2)

    assert sections.shape == (8,)
    assert len({tuple(c) for c in configs.tolist()}) == 9
    changed = np.count_nonzero(np.diff(configs, axis=0), axis=1)
    assert np.all(changed == 1)


@pytest.mark.parametrize("K, L", [(2, 5), (3, 4), (4, 3), (5, 2)])
def test_every_configuration_visited_once(K, L):
    """Each configuration appears exactly once and steps move one digit by ±1."""
    configs = gray_configurations(K, L)

    assert configs.shape == (K ** L, L)
    assert len({tuple(c) for c in configs.tolist()}) == K ** L
    steps = np.diff(configs, axis=0)
    assert np.all(np.count_nonzero(steps, axis=1) == 1)
    assert np.all(np.abs(steps).sum(axis=1) == 1)


def test_budget_exceeded():
    """K^L above the budget raises before any work."""
    with pytest.raises(EnumerationBudgetError):
        gray_schedule(2, 10, budget=1000)


def test_budget_error_is_a_validation_error():
    with pytest.raises(ValidationError):
        check_budget(3, 7, budget=2000)


def test_budget_from_environment(monkeypatch):
    """IMMSE_ENUM_BUDGET sets the default budget."""
    monkeypatch.setenv("IMMSE_ENUM_BUDGET", "16")
    init_config()

    assert check_budget(2, 4) == 16
    with pytest.raises(EnumerationBudgetError):
        check_budget(2, 5)
