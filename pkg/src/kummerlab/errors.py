"""Exception hierarchy shared by all kummerlab modules."""

from __future__ import annotations

__all__ = [
    "KummerError",
    "InvariantViolation",
    "PrimeMismatch",
    "NotDivisible",
    "PrecisionExhausted",
    "NotAUnit",
    "NotPIntegral",
    "InsufficientValues",
    "NotKummer",
    "DivisionByP",
    "NonzeroConstant",
    "InsufficientEntries",
    "NotInWKS0",
    "NotInWKSd",
    "NoZeroModP",
    "DoubleRootModP",
    "RelationViolated",
    "UnsupportedCase",
    "BackendOutOfRange",
    "ParityMismatch",
    "DigitDepthExceeded",
]


class KummerError(Exception):
    """Base class for every error raised by the library."""


class InvariantViolation(KummerError):
    """Something that a theorem guarantees did not hold: a bug, not bad input."""


class PrimeMismatch(KummerError, ValueError):
    pass


class NotDivisible(KummerError, ArithmeticError):
    pass


class PrecisionExhausted(KummerError, ArithmeticError):
    pass


class NotAUnit(KummerError, ArithmeticError):
    pass


class NotPIntegral(KummerError, ArithmeticError):
    pass


class InsufficientValues(KummerError, ValueError):
    pass


class NotKummer(KummerError, ValueError):
    pass


class DivisionByP(KummerError, ArithmeticError):
    pass


class NonzeroConstant(KummerError, ValueError):
    pass


class InsufficientEntries(KummerError, ValueError):
    pass


class NotInWKS0(KummerError, ValueError):
    pass


class NotInWKSd(KummerError, ValueError):
    pass


class NoZeroModP(KummerError, ValueError):
    pass


class DoubleRootModP(KummerError, ValueError):
    pass


class RelationViolated(InvariantViolation):
    pass


class UnsupportedCase(KummerError, ValueError):
    pass


class BackendOutOfRange(KummerError, ValueError):
    pass


class ParityMismatch(KummerError, ValueError):
    pass


class DigitDepthExceeded(KummerError, ValueError):
    pass
