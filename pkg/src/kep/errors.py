"""Exception hierarchy.

Numerical failures derive from :class:`NumericalError`; the CLI maps those to
exit status 3.
"""


class KepError(Exception):
    """Base class for all package errors."""


class NumericalError(KepError):
    """A computation failed for numerical reasons."""


class NotPositiveDefinite(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class DegenerateOverlap(NumericalError):
    pass


class SingularOverlap(NumericalError):
    pass


class NotConverged(NumericalError):
    """A quadrature failed its order-doubling stability check."""


class RootBracketFailure(NumericalError):
    pass


class OrderTooLarge(KepError, ValueError):
    pass


class DimensionMismatch(KepError, ValueError):
    pass


class IndexOutOfRange(KepError, IndexError):
    pass


class UnknownMethod(KepError, KeyError):
    pass
