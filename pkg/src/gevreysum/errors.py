"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: input/syntax problems exit 1,
domain and convergence problems exit 2, numeric failures exit 3.
"""


class GevreySumError(Exception):
    """Base class for all package errors."""


class SeriesFormatError(GevreySumError, ValueError):
    """Malformed series literal (JSON array of [re, im] pairs expected)."""


class InsufficientDataError(GevreySumError, ValueError):
    """Too few nonzero coefficients for the requested estimate."""


class OperatorSyntaxError(GevreySumError, ValueError):
    """Syntax error in an operator expression; carries the offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ZeroOperatorError(GevreySumError, ValueError):
    """Operator with all coefficients identically zero."""


class UnderdeterminedError(GevreySumError, ValueError):
    """A free coefficient index was not supplied by the caller."""

    def __init__(self, index: int):
        super().__init__(f"underdetermined at index {index}")
        self.index = index


class DomainError(GevreySumError, ValueError):
    """Evaluation point outside the convergence domain of a transform."""


class ContinuationError(GevreySumError, ValueError):
    """Analytic continuation could not be constructed reliably."""


class ExpressionError(GevreySumError, ValueError):
    """Invalid or unsafe callable expression."""


class CliUsageError(GevreySumError, ValueError):
    """Bad command line arguments."""


class QuadratureError(GevreySumError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message}; achieved tolerance {achieved:.3e}")
        self.achieved = achieved
