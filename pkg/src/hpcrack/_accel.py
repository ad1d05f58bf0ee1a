"""Backend selection for the compiled kernels.

Set ``HPCRACK_BACKEND=numpy`` to force the pure-numpy code path, or
``HPCRACK_BACKEND=numba`` (the default when numba imports) to use the
``@njit`` kernels.
"""
import os

_requested = os.environ.get("HPCRACK_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(
        f"HPCRACK_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

try:
    import numba
    from numba import njit, prange
    HAS_NUMBA = True
    # the system TBB is too old for numba; OpenMP is thread-safe and always built in
    if "NUMBA_THREADING_LAYER" not in os.environ:
        numba.config.THREADING_LAYER = "omp"

except ImportError:  # pragma: no cover - numba is an optional extra
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn

    prange = range

BACKEND = "numba" if (HAS_NUMBA and _requested == "numba") else "numpy"
