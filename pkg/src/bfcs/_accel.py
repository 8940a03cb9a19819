"""Optional numba acceleration.

Kernels are written once as plain Python over numpy arrays and compiled with
``numba.njit`` when numba is importable. Set ``BFCS_DISABLE_NUMBA=1`` to run
the same kernels as plain Python on numpy arrays.
"""
import os

_DISABLED = os.environ.get("BFCS_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    import numba

    HAS_NUMBA = True
except ImportError:
    numba = None
    HAS_NUMBA = False


def njit(func):
    """Compile ``func`` in nopython mode if numba is enabled, else return it."""
    if HAS_NUMBA:
        return numba.njit(cache=True)(func)
    return func


def backend():
    return "numba" if HAS_NUMBA else "numpy"
