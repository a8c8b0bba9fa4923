"""Exception types raised across the package."""


class InvalidDimensionError(ValueError):
    """Hilbert-space dimension is not an integer >= 2."""


class DimensionMismatchError(ValueError):
    pass


class NotPSDError(ValueError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""


class NotAStateError(NotPSDError):
    """Input is not a density operator (trace, Hermiticity or positivity fails)."""


class NotTracePreservingError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


class NotCompletelyPositiveError(ValueError):
    """Raised when validating tabulated input whose Choi matrix is not PSD."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class NonInvertibleProcessError(ArithmeticError):
    """The transfer matrix of E_{t,0} is singular or too ill-conditioned to invert."""

    def __init__(self, message, time=None, condition=None):
        super().__init__(message)
        self.time = time
        self.condition = condition


class SingularDistanceError(ArithmeticError):
    """A distance evaluated to +inf (relative entropy with disjoint supports)."""

    def __init__(self, message, t=None, tau=None):
        super().__init__(message)
        self.t = t
        self.tau = tau


class DomainError(ValueError):
    pass


class InputFormatError(ValueError):
    """A channel or process file is malformed."""
