"""Numerical checks of geometric modular flows and their generators in Minkowski space."""
from .errors import (
    AliasWarning,
    ChartBoundary,
    ConfigError,
    DomainError,
    DomainViolation,
    FitFailure,
    GridEscape,
    LifetimeBoundary,
    ModflowError,
    QuadratureFailure,
    SingularPoint,
    WindowTooSmall,
)
from .geometry import FourVector, Region, W_R, W_L, V_PLUS, V_MINUS, D1
from .grid import GridFunction
from .report import Check, VerificationReport

__version__ = "0.1.0"

__all__ = [
    "AliasWarning",
    "ChartBoundary",
    "Check",
    "ConfigError",
    "D1",
    "DomainError",
    "DomainViolation",
    "FitFailure",
    "FourVector",
    "GridEscape",
    "GridFunction",
    "LifetimeBoundary",
    "ModflowError",
    "QuadratureFailure",
    "Region",
    "SingularPoint",
    "V_MINUS",
    "V_PLUS",
    "VerificationReport",
    "W_L",
    "W_R",
    "WindowTooSmall",
]
