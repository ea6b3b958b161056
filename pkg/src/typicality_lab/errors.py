"""Exception types raised across the package."""


class TypicalityError(ValueError):
    """Base class for invalid inputs to the library."""


class DimensionMismatch(TypicalityError):
    pass


class InvalidOperator(TypicalityError):
    """An operator is not Hermitian, not within 0 <= E <= I, or otherwise corrupt."""


class UndefinedRatioError(TypicalityError, ZeroDivisionError):
    """The favoring ratio is undefined because the reference probability is zero."""


class HypothesisError(TypicalityError):
    """A result's hypothesis does not hold for the requested parameters.

    Attributes
    ----------
    hypothesis : str
        Short machine-readable name of the failed condition, e.g. ``"d0 > 1/eps^5"``.
    """

    def __init__(self, hypothesis: str, message: str):
        super().__init__(message)
        self.hypothesis = hypothesis
