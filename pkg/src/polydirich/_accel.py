"""Numba switch.

Hot kernels are compiled with numba unless ``POLYDIRICH_DISABLE_NUMBA`` is set
to a truthy value (or numba is not importable), in which case the pure-numpy
implementations in :mod:`polydirich._kernels` are used instead.
"""
import os

_FLAG = os.environ.get("POLYDIRICH_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _FLAG in ("1", "true", "yes", "on")

try:
    if DISABLED_BY_ENV:
        raise ImportError("numba disabled by POLYDIRICH_DISABLE_NUMBA")
    import numba
    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def njit(fn):
    """Compile ``fn`` in nopython mode, or return it untouched without numba.

    fastmath stays off: several kernels rely on IEEE ordering for bit-exact
    symmetry guarantees.
    """
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True, fastmath=False)(fn)


def backend():
    return "numba" if HAVE_NUMBA else "numpy"
