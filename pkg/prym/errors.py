"""Exception hierarchy for prym"""

from typing import Optional


class PrymError(Exception):
    """Base class for every error raised by prym."""

    exit_code = 2


class InputError(PrymError):
    """Malformed or inconsistent user input."""

    exit_code = 2


class MathematicalFailure(PrymError):
    """A computation met a non-generic configuration; a failed certificate, not a bug."""

    exit_code = 1


class InvalidPrime(InputError):
    pass


class PolynomialParseError(InputError):
    pass


class ModelFormatError(InputError):
    pass


class FixtureMismatch(InputError):
    pass


class DivisionByZero(PrymError, ZeroDivisionError):
    pass


class NotAUnit(PrymError, ArithmeticError):
    pass


class IncompatibleVariables(PrymError, ValueError):
    pass


class NotHomogeneous(PrymError, ValueError):
    pass


class IncompatibleDegrees(PrymError, ValueError):
    pass


class PositiveDimensional(PrymError):
    pass


class Inconclusive(PrymError):
    pass


class PointNotOnVariety(PrymError, ValueError):
    pass


class EpsilonReductionMismatch(PrymError):
    """The ε → 0 image of a first-order result differs from the base computation."""


class NotSingularAtP0(MathematicalFailure):
    pass


class NotOrdinaryNode(MathematicalFailure):
    pass


class NoGeneralMemberFound(MathematicalFailure):
    pass


class DegenerateNodes(MathematicalFailure):
    pass


class UnexpectedKernelDim(MathematicalFailure):
    pass


class UnexpectedTangentDim(MathematicalFailure):
    pass


class NonGenericPivot(MathematicalFailure):
    pass


def exit_code_for(exc: Optional[BaseException]) -> int:
    """Map an exception escaping a command to the CLI exit code."""
    if exc is None:
        return 0
    if isinstance(exc, PrymError):
        return exc.exit_code
    return 2
