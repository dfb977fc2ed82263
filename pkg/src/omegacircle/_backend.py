"""Select the compiled kernels when available, else the numpy ones.

Set ``OMEGACIRCLE_PURE=1`` to force the numpy kernels.
"""
import os

from . import _fallback

if os.environ.get("OMEGACIRCLE_PURE", "") not in ("", "0"):
    kernels = _fallback
    BACKEND = "numpy"
else:
    try:
        from . import _core as kernels
    except ImportError:  # extension not built
        kernels = _fallback
        BACKEND = "numpy"
    else:
        BACKEND = "cython"

__all__ = ["kernels", "BACKEND"]
