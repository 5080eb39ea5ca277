"""Exception hierarchy for the Q-Borel toolkit."""
from typing import Callable, Optional, Tuple


class QBorelError(Exception):
    """Base class for every error raised by the toolkit."""


class PreconditionError(QBorelError, ValueError):
    """A mathematical precondition of an operation does not hold."""


class NotQBorelError(PreconditionError):
    """An ideal is not closed under the Borel moves of a poset."""


class NotOrderIdealError(PreconditionError):
    """A variable set is not closed downward in the poset."""


class PosetError(PreconditionError):
    """Relations do not describe a naturally labeled poset."""


class UndefinedPairError(PreconditionError):
    """A Moebius value was requested for an incomparable or absent pair."""


class NoLinearQuotientsError(PreconditionError):
    """A colon ideal in the generator order is not generated by variables."""

    def __init__(self, index: int, message: Optional[str] = None):
        self.index = index
        super().__init__(message or f"no linear quotients at index {index}")


class MixedDegreeError(PreconditionError):
    """The last-variable split of a Borel ideal does not apply.

    Raised when the part divisible by x_n has Borel generators of mixed
    degrees and differs from its saturation in the least such degree.
    """

    def __init__(self, degrees: Tuple[int, ...], message: str):
        self.degrees = degrees
        super().__init__(message)


class LimitExceededError(QBorelError):
    """A configured node or recursion budget was exhausted."""


class PostconditionError(QBorelError):
    """A certified postcondition failed on the computed result."""


class ComplexConstructionError(QBorelError):
    """A lift in a mapping cone has no solution in the requested degree."""


class SessionParseError(QBorelError):
    """Syntax error in a session script, with its location."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class UndeclaredNameError(SessionParseError):
    """A session refers to a variable, poset or ideal never declared."""


def ensure(check: Callable[[], bool], message: str) -> None:
    """Evaluate a postcondition when result verification is enabled.

    Raises:
        PostconditionError: If the check returns False
    """
    from src.config import VERIFY_RESULTS

    if VERIFY_RESULTS and not check():
        raise PostconditionError(message)
