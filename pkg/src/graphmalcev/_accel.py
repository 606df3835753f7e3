"""Backend selection for the compiled kernels.

Set ``GRAPHMALCEV_DISABLE_NUMBA=1`` before import to force the numpy /
pure-Python paths.  When numba is not installed the fallback is used
automatically.
"""

import os

_FLAG = "GRAPHMALCEV_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - depends on environment
    numba = None



def _disabled() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and not _disabled()


def njit(func):
    """Compile ``func`` with numba if it is importable, else return it as is."""
    if not NUMBA_AVAILABLE:
        return func
    return numba.njit(cache=True, nogil=True)(func)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
