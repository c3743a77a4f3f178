"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; otherwise the
NumPy fallback is used.  Setting the environment variable KGBOUND_PURE=1
forces the fallback even when the extension is present (useful for the
bit-equality tests and benchmarks).  Both backends expose residual_point
and residual_grid with identical signatures and identical float behavior.
"""

from __future__ import annotations

import os

from . import py_fallback

STATUS_OK = py_fallback.STATUS_OK
STATUS_WINDOW = py_fallback.STATUS_WINDOW
STATUS_ENERGY_FACTOR = py_fallback.STATUS_ENERGY_FACTOR
STATUS_COMPLEX_ETA = py_fallback.STATUS_COMPLEX_ETA
STATUS_POLE = py_fallback.STATUS_POLE


def _select():
    if os.environ.get("KGBOUND_PURE", "").strip() in ("1", "true", "yes"):
        return py_fallback, "fallback"
    try:
        from . import _residual
    except ImportError:
        return py_fallback, "fallback"
    return _residual, "compiled"


_impl, BACKEND = _select()

residual_point = _impl.residual_point
residual_grid = _impl.residual_grid

__all__ = [
    "BACKEND",
    "residual_point",
    "residual_grid",
    "STATUS_OK",
    "STATUS_WINDOW",
    "STATUS_ENERGY_FACTOR",
    "STATUS_COMPLEX_ETA",
    "STATUS_POLE",
]
