"""numba switch.

Set ``THERMOMAJ_DISABLE_NUMBA=1`` to route every kernel through its
pure-numpy twin, or run without numba installed.
"""
import os

ENV_FLAG = "THERMOMAJ_DISABLE_NUMBA"

try:
    import numba
    from numba import njit, prange
    HAVE_NUMBA = True
    # probing an old TBB only produces a warning; prefer the other layers
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False
    prange = range

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda func: func


def numba_enabled() -> bool:
    return HAVE_NUMBA and os.environ.get(ENV_FLAG, "").lower() not in ("1", "true", "yes")


def default_backend() -> str:
    return "numba" if numba_enabled() else "numpy"
