"""Backend selection for the hot subset-search kernels.

Two interchangeable kernel families live in :mod:`synchrokit.kernels`:
loop kernels compiled with numba, and vectorized numpy kernels.  The
environment variable ``SYNCHROKIT_BACKEND`` picks one of them at import
time (``numba`` or ``numpy``).  When numba is requested but cannot be
imported, the numpy family is used instead.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_requested = os.environ.get("SYNCHROKIT_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(
        f"SYNCHROKIT_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

HAVE_NUMBA = numba is not None
BACKEND = "numba" if (_requested == "numba" and HAVE_NUMBA) else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, otherwise a no-op decorator.

    The loop kernels are always decorated through this shim so that the
    module can be imported (and its functions run interpreted) without numba.
    """
    if numba is not None:
        kwargs.setdefault("cache", True)
        kwargs.setdefault("nogil", True)
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn
