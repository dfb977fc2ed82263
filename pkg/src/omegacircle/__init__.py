"""Additive-function exponential sums and a numerical circle method for sums of three."""
from __future__ import annotations

__version__ = "0.1.0"

from ._backend import BACKEND
from .errors import ConfigurationError, FitError, InvalidArgument, OutOfRange, PrecisionError

__all__ = [
    "BACKEND",
    "ConfigurationError",
    "FitError",
    "InvalidArgument",
    "OutOfRange",
    "PrecisionError",
    "__version__",
]
