"""Domain errors.

Every error the library raises on bad input or an impossible request derives
from :class:`LrqError`.  The CLI reports ``type(err).__name__`` as the error
name, so class names are part of the wire format.
"""


class LrqError(Exception):
    """Base class of all domain errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


class BadInput(LrqError, ValueError):
    pass


class NotDivisible(LrqError):
    """Conductor of a cyclotomic number does not divide the target conductor."""


class ConductorTooLarge(LrqError):
    pass


class DimensionMismatch(LrqError):
    pass


class NotInvertible(LrqError):
    pass


class CapExceeded(LrqError):
    def __init__(self, cap: int):
        super().__init__(f"group closure exceeded cap {cap}")
        self.cap = cap


class NotAHomomorphism(LrqError):
    pass


class NotLinearlyReductive(LrqError):
    pass


class ConnectedPartNotCyclic(LrqError):
    pass


class NotVerySmall(LrqError):
    pass


class NotImplementedForNonAbelian(LrqError):
    pass


class Unrealizable(LrqError):
    pass


class MissingIdentification(LrqError):
    pass


class BadDimension(LrqError):
    pass


class BadSequence(LrqError):
    pass


def all_error_types() -> list[type[LrqError]]:
    """Every concrete domain error, in definition order."""
    out = []
    stack = list(LrqError.__subclasses__())
    while stack:
        cls = stack.pop(0)
        if cls not in out:
            out.append(cls)
        stack.extend(cls.__subclasses__())
    return out
