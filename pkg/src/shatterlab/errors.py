"""Exception hierarchy shared by every module."""


class ShatterlabError(Exception):
    """Base class for all package errors."""


class DimensionError(ShatterlabError, ValueError):
    """Operands have incompatible lengths or an empty sequence was given."""


class EmptyClassError(ShatterlabError, ValueError):
    """A dimension query was made against a class with no members."""


class DomainError(ShatterlabError, ValueError):
    """A numeric parameter lies outside the range where the quantity is defined."""


class CapacityError(ShatterlabError, RuntimeError):
    """An enumeration would exceed its configured size cap."""


class ValidationError(ShatterlabError, ValueError):
    """An input document or constructed object violates its invariants."""


class UnknownFunctionError(ShatterlabError, LookupError):
    """An observed value does not belong to any member of the class."""


class ConstructionError(ShatterlabError, RuntimeError):
    """An internal construction invariant was broken (should never happen)."""
