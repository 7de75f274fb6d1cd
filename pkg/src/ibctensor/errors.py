"""Exception types raised by the library.

Every exception derives from :class:`IBCError`, itself a ``ValueError``, so
callers that only care about "bad input or unanswerable question" can catch a
single type.
"""


class IBCError(ValueError):
    """Base class for all library errors."""


class IndexLengthMismatch(IBCError):
    pass


class EmptyIndexSet(IBCError):
    pass


class GroupTooLarge(IBCError):
    pass


class DegenerateProblem(IBCError):
    """Normalized criterion requested for a problem whose initial error is 0."""


class ComplexityOverflow(IBCError):
    """The enumeration budget was exhausted before the count finished.

    ``partial`` holds the number of indices counted so far (a lower bound).
    """

    def __init__(self, message, partial=0):
        super().__init__(message)
        self.partial = partial


class NotTraceClass(IBCError):
    """The eigenvalue sequence is not summable."""


class TrivialSpectrum(IBCError):
    """lambda_2 == 0; tractability questions are void."""


class Undecidable(IBCError):
    """A required asymptotic property of a family was not declared."""


class InvalidTau(IBCError):
    pass


class OutOfDomain(IBCError):
    pass


class NegativeVariance(IBCError):
    pass


class OddPExact(IBCError):
    pass


class Divergent(IBCError):
    """The requested power sum of the spectrum does not converge."""
