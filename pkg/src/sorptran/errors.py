"""Exception types shared across the package."""

from __future__ import annotations


class SorptranError(Exception):
    """Base class for all package errors."""


class DomainError(SorptranError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NewtonError(SorptranError):
    """A scalar Newton solve failed to converge.

    Carries the last iterate and its residual for diagnosis.
    """

    def __init__(self, message: str, last_iterate: float | None = None,
                 residual: float | None = None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual


class SweepError(SorptranError):
    """Fast sweeping did not reach the update tolerance within the sweep cap."""


class InstabilityError(SorptranError):
    """A scheme produced non-finite or unboundedly growing values.

    Expected for explicit schemes run above their Courant limit.
    """

    def __init__(self, message: str, step: int | None = None,
                 max_abs: float | None = None):
        super().__init__(message)
        self.step = step
        self.max_abs = max_abs


class RangeViolationError(SorptranError):
    """A value left the physically admissible range by more than round-off."""


class ConfigError(SorptranError):
    """An invalid run configuration; carries every violation found."""

    def __init__(self, violations: list[str]):
        super().__init__("invalid configuration:\n  " + "\n  ".join(violations))
        self.violations = list(violations)
