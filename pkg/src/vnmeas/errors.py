"""Exception hierarchy.

Every error the library raises on purpose derives from VnmeasError so the
CLI can map failure classes to exit codes in one place.
"""

from __future__ import annotations

__all__ = [
    "VnmeasError",
    "ConfigError",
    "DimensionError",
    "OrthogonalSelectionError",
    "TruncationError",
    "SeriesBudgetError",
    "DegenerateNormalizationError",
    "DegeneratePointerError",
    "ClassViolationError",
]


class VnmeasError(Exception):
    """Base class for all library errors."""


class ConfigError(VnmeasError):
    """Invalid or contradictory run configuration (CLI exit code 2)."""


class DimensionError(VnmeasError):
    """Operator and state dimensions do not match."""


class OrthogonalSelectionError(VnmeasError):
    """Pre- and post-selection overlap below 1e-14; the weak value diverges
    and the conditional pointer state is undefined (CLI exit code 3)."""


class TruncationError(VnmeasError):
    """Truncated Fock space too small for the requested coupling; population
    leaked into the guard band at the top of the ladder (CLI exit code 4)."""


class SeriesBudgetError(VnmeasError):
    """A series kernel failed to converge within its term budget."""


class DegenerateNormalizationError(VnmeasError):
    """Conditional-state normalization radicand at or below zero; the
    post-selected ensemble is empty to working precision."""


class DegeneratePointerError(VnmeasError):
    """Zero pointer variance where a signal-to-noise ratio was requested."""


class ClassViolationError(VnmeasError):
    """System operator does not satisfy its declared algebraic class."""
