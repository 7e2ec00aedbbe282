"""Exception hierarchy for the dnccap package.

Everything raised deliberately derives from DncError so callers can catch
one base class. The CLI maps subclasses to exit codes.
"""

from __future__ import annotations


class DncError(Exception):
    """Base class for all errors raised by this package."""


class SpecError(DncError):
    """A channel spec document or regex failed to parse or validate.

    Messages always carry a source position: a line/column or byte offset
    for syntax errors, a JSON path or regex offset for semantic ones.
    """


class BasisMismatchError(DncError):
    """Operands were built over different weight bases."""


class EvalOverflowError(DncError):
    """Numeric evaluation left the double range."""


class ExpansionError(DncError):
    """A quotient is not a valid string-counting series (negative or
    non-integral coefficients, or a vanishing denominator constant term)."""


class ResourceLimitError(DncError):
    """A configured term, state, or configuration budget was exceeded.

    `partial` holds whatever was completed before the budget ran out, when
    the producer can offer it; `partial_results` says whether it did.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
        self.partial_results = partial is not None


class UnsupportedChannelError(DncError):
    """The requested construction does not apply to this channel."""


class SolverError(DncError):
    """Root or pole finding could not produce a certified answer."""


class InsufficientDataError(DncError):
    """Too few data points to fit or estimate anything meaningful."""
