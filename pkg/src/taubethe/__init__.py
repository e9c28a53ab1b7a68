"""Tau functions, six-vertex partition functions and Bethe-state scalar products,
checked against each other in exact rational and floating-point arithmetic."""

from .scalars import (
    DEFAULT_TOL,
    ConvergenceError,
    DimensionError,
    Mode,
    ModelViolationError,
    SingularError,
    SizeError,
    TauBetheError,
    TruncationError,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL", "Mode", "TauBetheError", "DimensionError", "SingularError",
    "TruncationError", "SizeError", "ConvergenceError", "ModelViolationError", "__version__",
]
