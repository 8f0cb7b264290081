"""Kernel backend selection.

The compiled ``_core`` extension is used when it imports; otherwise the
pure-Python ``_pycore`` module is used. Setting ``TORSIONPH_PURE_PYTHON=1``
forces the fallback. ``use_backend`` switches at runtime (tests, benchmarks).
"""

import os

from . import _pycore

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

_active = None


def available_backends():
    return ["compiled", "python"] if _core is not None else ["python"]


def use_backend(name):
    """Select ``"compiled"`` or ``"python"``; returns the previous name."""
    global _active
    if name == "compiled" and _core is None:
        raise RuntimeError("compiled kernels are not available")
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    previous = backend()
    _active = _core if name == "compiled" else _pycore
    return previous


def backend():
    return "compiled" if _active is _core and _core is not None else "python"


def snf(rows, m, n):
    if _active is not _pycore:
        try:
            return _active.snf(rows, m, n)
        except OverflowError:
            pass
    return _pycore.snf(rows, m, n)


def rank_mod_p(rows, ncols, p):
    if _active is not _pycore:
        try:
            return _active.rank_mod_p(rows, ncols, p)
        except OverflowError:
            pass
    return _pycore.rank_mod_p(rows, ncols, p)


def nullspace_mod_p(rows, ncols, p):
    if _active is not _pycore:
        try:
            return _active.nullspace_mod_p(rows, ncols, p)
        except OverflowError:
            pass
    return _pycore.nullspace_mod_p(rows, ncols, p)


def reduce_columns_mod_p(columns, nrows, p):
    if _active is not _pycore:
        try:
            return _active.reduce_columns_mod_p(columns, nrows, p)
        except OverflowError:
            pass
    return _pycore.reduce_columns_mod_p(columns, nrows, p)


if _core is not None and os.environ.get("TORSIONPH_PURE_PYTHON", "") not in ("1", "true", "yes"):
    _active = _core
else:
    _active = _pycore
