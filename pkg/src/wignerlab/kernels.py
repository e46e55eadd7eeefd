"""Hot-loop backend selection.

The compiled ``_core`` module is used when importable; otherwise (or when
the ``WIGNERLAB_PURE`` environment variable is set) the numpy versions in
``_purepy`` are used.  ``WIGNERLAB_THREADS`` caps the thread count of the
compiled kernels.
"""
import os
from contextlib import contextmanager

import numpy as np

from . import _purepy

BACKEND = "python"
_impl = _purepy
if not os.environ.get("WIGNERLAB_PURE"):
    try:
        from . import _core as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        _impl = _purepy


def num_threads() -> int:
    env = os.environ.get("WIGNERLAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def wigner_quadrature(f, y, p, hbar, dy):
    f = np.ascontiguousarray(f, dtype=np.complex128)
    y, p = (np.ascontiguousarray(a, dtype=np.float64) for a in (y, p))
    return _impl.wigner_quadrature(f, y, p, float(hbar), float(dy), num_threads())


def cross_direct(U, V, q, y, p, p1, p2, x1, x2, eps, hbar):
    U, V = (np.ascontiguousarray(a, dtype=np.float64) for a in (U, V))
    q, y, p, p1, p2 = (np.ascontiguousarray(a, dtype=np.float64) for a in (q, y, p, p1, p2))
    return _impl.cross_direct(U, V, q, y, p, p1, p2, float(x1), float(x2), float(eps), float(hbar), num_threads())


def backends():
    """Available backends as ``{name: module}``."""
    out = {"python": _purepy}
    try:
        from . import _core

        out["cython"] = _core
    except ImportError:
        pass
    return out


@contextmanager
def use_backend(name: str):
    """Temporarily route the hot loops through backend ``name``."""
    global _impl, BACKEND
    table = backends()
    if name not in table:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(table)}")
    saved = _impl, BACKEND
    _impl, BACKEND = table[name], name
    try:
        yield
    finally:
        _impl, BACKEND = saved
