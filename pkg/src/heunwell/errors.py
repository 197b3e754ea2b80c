"""Exception types raised across the package."""


class HeunWellError(Exception):
    """Base class for all package errors."""


class InvalidInputError(HeunWellError, ValueError):
    pass


class InvalidFamilyError(InvalidInputError):
    pass


class UnboundStateError(InvalidInputError):
    """Raised when a bound-state routine receives a non-negative energy."""


class NoBoundStateError(InvalidInputError):
    """Raised when U0*d^2 does not exceed the threshold for the requested state."""


class InvalidIndexError(InvalidInputError):
    pass


class IndicialDegeneracyError(HeunWellError):
    """Raised when the recurrence hits A_n = 0 (beta a negative integer)."""

    def __init__(self, n):
        super().__init__(f"A_n vanishes at n={n}; recurrence is degenerate")
        self.n = n


class DivergenceRiskError(HeunWellError):
    pass


class NoConvergenceError(HeunWellError):
    def __init__(self, n_cap, residual):
        super().__init__(f"series did not converge within {n_cap} terms (last tail ratio {residual:.3e})")
        self.n_cap = n_cap
        self.residual = residual


class TerminationNotAchievedError(HeunWellError):
    """Raised when the series fails to truncate at the requested degree."""


class BracketError(HeunWellError):
    pass


class DegenerateSampleError(HeunWellError):
    pass
