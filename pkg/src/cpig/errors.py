"""Exception and warning classes shared across the package."""


class CpigError(Exception):
    """Base class for every error raised by :mod:`cpig`."""


class DomainError(CpigError, ValueError):
    """An argument lies outside the domain of the operation."""


class InvalidKnots(CpigError, ValueError):
    """A knot list does not describe a valid piecewise-linear CDF.

    ``index`` is the position of the first offending knot.
    """

    def __init__(self, message, index):
        super().__init__(f"{message} (knot index {index})")
        self.index = index


class EmptySample(CpigError, ValueError):
    pass


class NoDensity(CpigError, TypeError):
    """The distribution has no density (empirical step CDFs)."""


class NonMonotone(CpigError, ValueError):
    """A transform meant to be increasing has a non-positive derivative."""


class UnboundedSupport(CpigError, ValueError):
    pass


class UnsupportedModel(CpigError, ValueError):
    pass


class Divergent(CpigError, ArithmeticError):
    """The requested integral has no finite value."""


class MaxDepth(CpigError, ArithmeticError):
    """Adaptive refinement ran out of budget before meeting the tolerance.

    The best available estimate is kept on ``value`` and ``abs_err``.
    """

    def __init__(self, message, value=float("nan"), abs_err=float("inf")):
        super().__init__(message)
        self.value = value
        self.abs_err = abs_err


class RatioSingularity(CpigError, ArithmeticError):
    """F is positive where G vanishes, so F/G is unbounded."""


class SeriesDivergenceWarning(RuntimeWarning):
    """Terms of a partial series keep growing in magnitude."""
