"""Exception hierarchy.

Input problems derive from :class:`InputError` (a ``ValueError``); numerical
degeneracies derive from :class:`DegeneracyError`. The CLI maps the two
families to different exit statuses.
"""


class MarkovLawError(Exception):
    """Base class for every error raised by this package."""


class InputError(MarkovLawError, ValueError):
    """Malformed or out-of-contract input."""


class DegeneracyError(MarkovLawError, ArithmeticError):
    """The numerics are well defined but the answer is not unique."""


# markov core
class NotSquare(InputError):
    pass


class NotStochastic(InputError):
    pass


class BadInitialState(InputError):
    pass


class BadParameter(InputError):
    pass


class IncompleteMap(InputError):
    pass


class NonUnique(DegeneracyError):
    """No unique equilibrium distribution could be established."""


# law extraction
class SeriesTooShort(InputError):
    pass


class InsufficientLags(InputError):
    pass


class NotSymmetric(InputError):
    pass


class OrderTooSmall(InputError):
    pass


class IndefiniteBeyondTolerance(DegeneracyError):
    pass


class DegenerateNullspace(DegeneracyError):
    """Two smallest Gram eigenvalues coincide, so the law order is ambiguous."""


# scanning
class TooShort(InputError):
    pass


class WindowTooSmall(InputError):
    pass


class EmptyScan(InputError):
    pass


class EmptyInput(InputError):
    pass


# ingestion
class IngestError(InputError):
    pass


class UnreadableSource(IngestError):
    pass


class NoDataRows(IngestError):
    pass


class EmptyAfterFilter(IngestError):
    pass
