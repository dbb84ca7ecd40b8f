from __future__ import annotations


class PenaltyModelError(ValueError):
    """Base class for invalid inputs to penalty-model operations."""


class DimensionError(PenaltyModelError):
    """Assignment or group degree does not match the model's variable count."""


class CapacityError(PenaltyModelError):
    """Problem exceeds an enumeration, LP or group-closure guard."""


class DomainError(PenaltyModelError):
    """Parameter outside its mathematical domain (weight range, non-positive scale)."""


class NoGapError(PenaltyModelError):
    """Model takes a single value on every assignment."""


class UnsupportedWeightError(PenaltyModelError):
    """Closed-form optimal scale requested for r = 0 or r = n."""


class InapplicableError(PenaltyModelError):
    """Analysis does not apply to this model (e.g. complete interaction graph)."""


class PreconditionError(PenaltyModelError):
    """Model fails a checked hypothesis of the requested analysis."""


class ModelFormatError(PenaltyModelError):
    """Malformed model, bounds or group file."""


class ConfigError(PenaltyModelError):
    """Inconsistent command configuration."""


class SolverError(RuntimeError):
    """Numerical breakdown inside the simplex solver."""
