"""Exception types raised by hdatail."""


class HdaError(Exception):
    """Base class for all hdatail errors."""


class SampleFormatError(HdaError, ValueError):
    """Malformed CSV input. ``line`` is 1-based, or None for whole-file problems."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateSpacingError(HdaError, ValueError):
    """Order-statistic spacing is zero, so the estimator is undefined."""


class InsufficientDataError(HdaError, ValueError):
    """k is too large (or too small) for the available order statistics."""


class EmptySelectionError(HdaError, ValueError):
    """No observations passed the rank threshold."""


class ModelMismatchError(HdaError, ValueError):
    """A model and a sample (or a model and a query) are incompatible."""


class NoAsymptoticIndependenceError(HdaError):
    """Detection found no evidence of asymptotic independence; HDA fit refused."""
