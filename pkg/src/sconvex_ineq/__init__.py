"""Hadamard- and Simpson-type inequalities for s-convex functions, checked numerically."""

from .core import (
    BoundReport,
    FunctionSpec,
    InequalityParams,
    Interval,
    builtin,
    validate_params,
)
from .quadrature import QuadResult, integrate

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "FunctionSpec",
    "InequalityParams",
    "Interval",
    "QuadResult",
    "__version__",
    "builtin",
    "integrate",
    "validate_params",
]
