"""Exception types raised across the package."""


class SymframesError(Exception):
    """Base class for all package errors."""


class DimMismatch(SymframesError, ValueError):
    pass


class NotNormal(SymframesError, ValueError):
    pass


class DimOverflow(SymframesError, ValueError):
    pass


class IncompleteDecomposition(SymframesError, ValueError):
    pass


class IndexOutOfRange(SymframesError, IndexError):
    pass


class DegenerateDraw(SymframesError, RuntimeError):
    """A random central element failed to separate the blocks of an algebra."""


class NotCentral(SymframesError, ValueError):
    pass


class TheoremViolation(SymframesError, AssertionError):
    """Two circuits that must compile to the same unitary did not."""
