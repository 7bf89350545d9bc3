"""Exception and warning types shared across the package."""


class ModflowError(Exception):
    """Base class for library errors."""


class DomainError(ModflowError, ValueError):
    """Input outside the mathematical domain of an operation."""


class SingularPoint(ModflowError, ArithmeticError):
    """A conformal denominator vanishes at the requested point."""


class ChartBoundary(ModflowError, ArithmeticError):
    """Projective point with xi4 + xi5 = 0 has no Minkowski image."""


class FitFailure(ModflowError, RuntimeError):
    """Least-squares fit left a residual above the accepted bound."""


class GridEscape(ModflowError, RuntimeError):
    """A coordinate rescaling pushed significant mass off the grid."""


class DomainViolation(ModflowError, ValueError):
    """Flow parameter outside the validity range of the log formula."""


class QuadratureFailure(ModflowError, RuntimeError):
    """Adaptive quadrature did not meet its error or tail bound."""


class WindowTooSmall(ModflowError, RuntimeError):
    """Sampling window truncates the correlator too early."""


class LifetimeBoundary(ModflowError, ValueError):
    """Observer proper time at or beyond the diamond lifetime."""


class ConfigError(ModflowError, ValueError):
    """Invalid or missing run configuration."""


class AliasWarning(UserWarning):
    """Spectral content near Nyquist; the grid under-resolves the input."""
