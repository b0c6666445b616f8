"""Hot subset-search kernels in two interchangeable families.

``loops`` holds numba-compiled loop kernels, ``vectorized`` the numpy
equivalents.  :data:`active` is the family chosen by ``SYNCHROKIT_BACKEND``
(see :mod:`synchrokit._accel`); :func:`get` returns either one explicitly,
which is how the tests and the benchmark compare them.
"""
from .._accel import BACKEND
from . import loops, vectorized

_FAMILIES = {"numba": loops, "numpy": vectorized}


def get(name=None):
    if name is None:
        name = BACKEND
    try:
        return _FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown kernel backend {name!r}") from None


active = get()

__all__ = ["BACKEND", "active", "get", "loops", "vectorized"]
