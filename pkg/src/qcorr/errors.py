"""Exception types shared across the package."""


class InvalidStateError(ValueError):
    """Input fails density-matrix validation (Hermiticity, trace, positivity)."""


class DimensionMismatchError(ValueError):
    """Operands have incompatible or unsupported dimensions for the requested measure."""
