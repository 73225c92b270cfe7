"""Optional numba acceleration.

Kernels are written in a numba-compatible subset of numpy. When numba is
missing, or ``LATPACK_DISABLE_NUMBA=1`` is set before import, ``njit`` is the
identity and the same code runs as plain numpy.
"""
import os

_disabled = os.environ.get("LATPACK_DISABLE_NUMBA", "").strip() not in ("", "0")

try:
    if _disabled:
        raise ImportError
    import numba as _nb
except ImportError:
    _nb = None

USING_NUMBA = _nb is not None


def njit(fn):
    if _nb is None:
        return fn
    return _nb.njit(cache=True)(fn)
