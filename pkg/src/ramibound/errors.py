"""Exception hierarchy shared by all ramibound modules.

Every failure mode that callers are expected to handle gets its own class so
the CLI can map them onto stable exit codes.
"""


class RamiboundError(Exception):
    """Base class for all library errors."""


class InputError(RamiboundError):
    """Malformed or out-of-contract input (CLI exit code 2)."""


class BaseMismatchError(InputError):
    """Operands built over different base parameters."""


class NonUnitError(RamiboundError):
    """Inversion of a non-unit was requested."""


class PrecisionError(RamiboundError):
    """A result cannot be certified at the working precision (exit code 4)."""


class UndecidableError(PrecisionError):
    """A predicate on inexact valuations cannot be decided at this precision."""


class CapExceededError(RamiboundError):
    """An enumeration would exceed the configured candidate cap (exit code 3)."""


class NonConvergenceError(RamiboundError):
    """The successive-approximation solver did not converge (exit code 4).

    This signals a violated precondition: the starting point did not satisfy
    the congruence at the required level, or the contraction gain was not
    positive.
    """


class NotHeightError(RamiboundError):
    """The Frobenius matrix has no witness at the requested height."""


class ValuationTieError(RamiboundError):
    """Ultrametric analysis met two candidate terms of equal minimal valuation,
    so only a lower bound is derivable."""


class IntegralityError(RamiboundError):
    """An exact division that must be exact was not; indicates a bug."""
