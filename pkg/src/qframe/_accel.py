"""Numba switch.

Set ``QFRAME_DISABLE_NUMBA=1`` to force the pure-numpy kernels. When numba is
not importable the numpy path is used regardless.
"""

from __future__ import annotations

import os

_disabled = os.environ.get("QFRAME_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _disabled:
        raise ImportError
    import numba as _nb
except ImportError:  # pragma: no cover - depends on environment
    _nb = None

USE_NUMBA: bool = _nb is not None


def njit(fn):
    """``numba.njit(cache=True)`` when acceleration is on, else identity."""
    if _nb is None:
        return fn
    return _nb.njit(cache=True)(fn)
