"""Exception hierarchy.

All library errors derive from :class:`AccretiveError` so callers can
distinguish toolkit failures from programming errors.
"""


class AccretiveError(Exception):
    """Base class for all errors raised by this package."""


# --- grids and assembly ---

class NonpositiveLength(AccretiveError):
    """Interval has b <= a."""


class TooFewPoints(AccretiveError):
    """Grid needs at least two interior points."""


class OrderTooHigh(AccretiveError):
    """Derivative or Sobolev order does not fit on the grid."""


class NonellipticCoefficient(AccretiveError):
    """Diffusion coefficient is not bounded away from zero."""


class SignViolation(AccretiveError):
    """Coefficient violates an alternating sign rule."""


class DimensionMismatch(AccretiveError):
    """Operands live on different grids or have different sizes."""


# --- fractional operators ---

class NonpositiveOrder(AccretiveError):
    """Fractional integral requires a strictly positive order."""


class SingularGram(AccretiveError):
    """Gram matrix is not positive definite."""


# --- forms ---

class NonAccretive(AccretiveError):
    """An operator whose Hermitian part is not positive definite.

    Estimated coercivity constants are nonpositive, so every downstream
    inequality is void.
    """


class NonpositiveEpsilon(AccretiveError):
    """Sector parameter epsilon must be positive."""


# --- spectral ---

class NotHermitian(AccretiveError):
    """Matrix fails the Hermitian symmetry tolerance."""


class NotPositiveDefinite(AccretiveError):
    """Matrix has a nonpositive eigenvalue where positivity is required."""


class ConvergenceFailure(AccretiveError):
    """Dense eigensolver did not converge."""


class SpectrumHit(AccretiveError):
    """Requested shift is numerically indistinguishable from an eigenvalue."""


class WindowTooSmall(AccretiveError):
    """Decay fit window has fewer than five indices."""


class NonpositiveValue(AccretiveError):
    """Decay fit received a nonpositive value inside the window."""


# --- verification ---

class InsufficientSizes(AccretiveError):
    """Cross-size check needs at least three grid sizes."""


# --- configuration ---

class ParseError(AccretiveError):
    """Malformed configuration text."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ConstraintError(AccretiveError):
    """Well-formed configuration that violates a model constraint."""
