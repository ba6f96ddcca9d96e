"""Errors raised by exact enumeration."""

from shared.validators import ValidationError


class EnumerationBudgetError(ValidationError):
    """Raised when K^L exceeds the configured enumeration budget."""
    pass


class NonFiniteEnergyError(ArithmeticError):
    """Raised when a configuration energy is not finite."""
    pass
