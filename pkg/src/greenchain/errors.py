"""Exception hierarchy shared by every module in the package."""


class GreenChainError(Exception):
    """Base class for every failure this package raises on purpose."""


class DomainError(GreenChainError, ValueError):
    """Argument lies outside the validated domain of an operation."""


class RangeError(GreenChainError, OverflowError):
    """Result magnitude exceeds the double-precision range."""


class NumericError(GreenChainError, ArithmeticError):
    """An iteration failed to converge or produced an unusable result.

    May carry a ``best`` attribute with the best iterate reached, and a
    ``partial`` attribute with the spectrum levels completed before a
    mid-list failure.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
        self.partial = None


class SingularMatrixError(NumericError):
    """A pivot collapsed below the absolute floor during factorization."""


class NearPoleError(NumericError):
    """Matrix is within pivot tolerance of singular.

    For characteristic matrices this means the spectral parameter sits on
    (or numerically indistinguishable from) a characteristic root.
    """


class ConfigError(GreenChainError, ValueError):
    """Invalid configuration file or environment setting."""
