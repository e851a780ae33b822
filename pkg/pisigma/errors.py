"""
Exception hierarchy for the summation engine.

Every error carries the exit code the command line maps it to. Absent
telescopers are results (Optional returns), never exceptions.
"""

from typing import Iterable, Optional


class PisigmaError(Exception):
    """Base class for all engine errors"""

    exit_code: int = 1


class ParseError(PisigmaError):
    """Input text does not conform to the expression grammar"""

    exit_code = 4

    def __init__(self, message: str, offset: int, expected: Iterable[str] = ()):
        self.offset = offset
        self.expected = sorted(set(expected))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")


class ValidationError(PisigmaError):
    """Structurally valid input that violates a scope or bound rule"""

    exit_code = 4


class UnsupportedError(PisigmaError):
    """Input outside the supported class of nested hypergeometric expressions"""

    exit_code = 4


class NoTelescoperError(PisigmaError):
    """A telescoper was required but does not exist"""

    exit_code = 2


class NoRecurrenceError(PisigmaError):
    """Creative telescoping found no recurrence up to the order limit"""

    exit_code = 2


class UnsolvedRecurrenceError(PisigmaError):
    """Recurrence solving produced too few solutions"""

    exit_code = 3


class InconsistentSystemError(PisigmaError):
    """No linear combination of the solutions matches the target values"""

    exit_code = 3


class UndecidedError(PisigmaError):
    """Product extension check outside the decidable class"""

    exit_code = 5


class EvaluationError(PisigmaError):
    """Numeric evaluation failed"""

    exit_code = 1


class PoleError(EvaluationError):
    """Evaluation hit a pole (division by zero, factorial of a negative integer)"""


class EmsFailure(PisigmaError):
    """Structured abort of the definite multi-sum driver"""

    exit_code = 2

    def __init__(self, step: str, sub_sum: str, reason: str, exit_code: Optional[int] = None):
        self.step = step
        self.sub_sum = sub_sum
        self.reason = reason
        if exit_code is not None:
            self.exit_code = exit_code
        super().__init__(f"{step} failed on {sub_sum}: {reason}")
