"""Exception types shared across the package."""

from __future__ import annotations


class ConfigurationError(ValueError):
    """Raised when user-supplied parameters violate a documented precondition."""


class NumericalError(ArithmeticError):
    """Raised when an iterative numeric routine cannot reach its tolerance.

    Attributes:
        error_estimate: Best available estimate of the achieved absolute
            error, or None when the routine diverged before producing one.
    """

    def __init__(self, message: str, error_estimate: float | None = None) -> None:
        super().__init__(message)
        self.error_estimate = error_estimate


class DegenerateGeometryError(RuntimeError):
    """Raised when repeated redraws cannot produce a usable network realization."""
