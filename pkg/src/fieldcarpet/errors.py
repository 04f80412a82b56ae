"""Exception hierarchy shared by all fieldcarpet modules."""


class CarpetError(Exception):
    """Base class for every error raised by fieldcarpet."""


class UsageError(CarpetError, ValueError):
    """Malformed input: mismatched fields, out-of-range indices, bad descriptors."""


class DomainError(CarpetError, ArithmeticError):
    """Mathematically undefined request, e.g. inverting zero."""


class CapacityError(CarpetError):
    """A dense object would exceed the configured size guard."""


class ConsistencyError(CarpetError):
    """An internal invariant failed; indicates a bug or an incomplete catalog."""
