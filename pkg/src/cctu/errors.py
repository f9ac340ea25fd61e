"""Exception types shared across the package."""


class CctuError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(CctuError):
    """Operands have incompatible shapes."""


class ScaleError(CctuError):
    """An enumeration or search exceeded its configured desk-scale budget."""


class InfeasibleRelaxationError(CctuError):
    """The underlying integer-linear relaxation has no solution."""


class InputFormatError(CctuError):
    """Malformed instance text; carries a location when available."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedInstanceError(CctuError):
    """The (m, |R|) combination is outside what the structural solver covers."""
