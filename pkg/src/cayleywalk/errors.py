"""Exception types shared across the package."""


class CayleyWalkError(Exception):
    pass


class InvalidSpec(CayleyWalkError, ValueError):
    """Parameters outside a family's documented range, or a malformed spec."""


class CapExceeded(CayleyWalkError):
    """Predicted group order (or enumeration size) is above the configured cap."""


class UnknownElement(CayleyWalkError, KeyError):
    """Element is not a vertex of the Cayley graph it was looked up in."""


class DomainError(CayleyWalkError, ValueError):
    """Argument outside the domain where an asymptotic formula is defined."""
