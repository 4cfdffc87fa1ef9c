"""
Errors: Exception Hierarchy for kam-criteria

Every error raised by the package derives from KamCriteriaError so that the
pipeline can capture failures per stage and map them to exit codes.
"""


class KamCriteriaError(Exception):
    """Base class for all package errors."""


class InvalidInputError(KamCriteriaError, ValueError):
    """An argument or configuration value is outside its admissible set."""


class DepthError(KamCriteriaError, IndexError):
    """
    An index lies beyond the stored continued-fraction depth or the chord window.

    Attributes:
        required: Depth (or window size) that would be needed, if known
    """

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


class ConvergenceError(KamCriteriaError, RuntimeError):
    """
    The Birkhoff solver exhausted its iteration budget.

    Attributes:
        best_residual: Smallest Euler-Lagrange residual reached
    """

    def __init__(self, message: str, best_residual: float):
        super().__init__(f"{message} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


class DegeneracyError(KamCriteriaError, ArithmeticError):
    """Two orbit points (or a chord length) collapsed below the degeneracy floor."""


class InvariantViolation(KamCriteriaError, AssertionError):
    """A proven identity or inequality failed on computed data."""


class EmptyFamilyError(KamCriteriaError, LookupError):
    """Chord, pair or quadruple enumeration produced no members."""


class InfeasibleConfigError(KamCriteriaError, ValueError):
    """
    The experiment configuration cannot resolve the requested kappa-range.

    Attributes:
        required_m: Smallest convergent index M that would be feasible, if known
    """

    def __init__(self, message: str, required_m: int | None = None):
        super().__init__(message)
        self.required_m = required_m


class SlopeError(InvariantViolation):
    """
    A chord slope left the ordering bound |s| <= 2.

    Attributes:
        slope: The offending slope
    """

    def __init__(self, message: str, slope: float):
        super().__init__(message)
        self.slope = slope
