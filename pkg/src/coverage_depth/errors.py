"""Exception types raised across the package."""


class CoverageDepthError(Exception):
    """Base class for all errors raised by this package."""


class NotPrimePower(CoverageDepthError, ValueError):
    pass


class MixedFields(CoverageDepthError, ValueError):
    pass


class DimensionOutOfRange(CoverageDepthError, ValueError):
    pass


class IndexOutOfRange(CoverageDepthError, IndexError):
    pass


class EnumerationTooLarge(CoverageDepthError):
    pass


class RankDeficient(CoverageDepthError, ValueError):
    """The columns do not span the whole space (some hyperplane holds them all)."""

    def __init__(self, message, hyperplane=None):
        super().__init__(message)
        self.hyperplane = hyperplane


class ZeroColumn(CoverageDepthError, ValueError):
    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class TooLarge(CoverageDepthError):
    pass


class MaxSamplesExceeded(CoverageDepthError, RuntimeError):
    pass


class SearchTooLarge(CoverageDepthError):
    pass


class InvalidParams(CoverageDepthError, ValueError):
    pass


class ConstraintViolation(CoverageDepthError, ValueError):
    pass


class SingularDenominator(CoverageDepthError, ZeroDivisionError):
    pass
