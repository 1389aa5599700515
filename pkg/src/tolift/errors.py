"""Exception types shared across the package.

Everything a user can trigger through bad input derives from ToliftError;
the CLI maps those to exit code 2.  LiftInternalError marks a consistency
check failing inside a construction, which means a bug, not bad input.
"""


class ToliftError(Exception):
    """Base class for all input-level errors."""


class ParseError(ToliftError):
    """Syntax or format error in a term, identity, or data file.

    `position` is the 0-based character offset when parsing a string,
    or the 1-based line number when parsing a file (see `where`).
    """

    def __init__(self, message: str, position: int | None = None, where: str = "offset"):
        self.position = position
        self.where = where
        if position is not None:
            message = f"{message} ({where} {position})"
        super().__init__(message)


class SignatureMismatchError(ToliftError):
    """Two algebras that must share a signature do not."""


class EvalError(ToliftError):
    """Term evaluation hit an unassigned variable or unknown operation."""


class CapExceededError(ToliftError):
    """A brute-force scan or construction would exceed its configured cap."""


class NotAToleranceError(ToliftError):
    """A relation offered as a tolerance (or congruence) fails the check."""


class LiftStructureError(ToliftError):
    """A lift artifact is shaped inconsistently with its base algebra.

    Out-of-range indices, wrong lengths, or non-canonical ordering; semantic
    defects are reported by the verification checks instead of raised.
    """


class LiftInternalError(Exception):
    """A machine-checked closure property failed during construction.

    Raised when a block set or lifted carrier turns out not to be closed,
    which cannot happen for verified inputs; it signals a bug.
    """
