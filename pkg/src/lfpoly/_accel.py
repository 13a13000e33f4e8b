"""Optional numba acceleration.

Set ``LFPOLY_DISABLE_NUMBA=1`` to force the pure-numpy kernels.
"""
import os

try:
    from numba import njit as _njit
    NUMBA_INSTALLED = True
except ImportError:  # pragma: no cover
    NUMBA_INSTALLED = False

USE_NUMBA = NUMBA_INSTALLED and os.environ.get("LFPOLY_DISABLE_NUMBA", "").lower() not in ("1", "true", "yes")


def optional_njit(*args, **kwargs):
    """``numba.njit`` when available, identity otherwise."""
    def decorator(func):
        if NUMBA_INSTALLED:
            return _njit(*args, **kwargs)(func)
        return func
    return decorator
