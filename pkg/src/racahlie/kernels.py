"""Backend selection for the integer sparse-matrix kernels.

The compiled extension is used when it imports and when operands are small
enough for int64 accumulation; everything else goes through the exact
pure-Python implementation. Set ``RACAHLIE_PURE_PYTHON=1`` to force the
fallback.
"""
from __future__ import annotations

import contextlib
import os

import numpy as np

from . import _pykernels

try:
    if os.environ.get("RACAHLIE_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _kernels as _ckernels
except ImportError:
    _ckernels = None

LIMIT = 2**62

_active = "compiled" if _ckernels is not None else "python"


def available() -> list[str]:
    return ["compiled", "python"] if _ckernels is not None else ["python"]


def backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in available():
        raise ValueError(f"backend {name!r} unavailable; choose from {available()}")
    _active = name


@contextlib.contextmanager
def using(name: str):
    prev = _active
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def _maxabs(x) -> int:
    if x.size == 0:
        return 0
    if x.dtype == object:
        return max(abs(v) for v in x.tolist())
    return int(np.abs(x).max())


def _small(x) -> bool:
    return x.dtype == np.int64


def spgemm(n_rows, n_cols, a, b):
    """CSR product; ``a`` and ``b`` are ``(indptr, indices, data)`` triples."""
    ap, ai, ax = a
    bp, bi, bx = b
    if _active == "compiled" and _small(ax) and _small(bx):
        rowlen = int(np.diff(ap).max()) if ap.size > 1 else 0
        if _maxabs(ax) * _maxabs(bx) * max(rowlen, 1) < LIMIT:
            return _ckernels.spgemm(n_rows, n_cols, ap, ai, ax, bp, bi, bx)
    return _pykernels.spgemm(n_rows, n_cols, ap, ai, ax, bp, bi, bx)


def lincomb(n_rows, alpha: int, a, beta: int, b):
    """``alpha*A + beta*B`` on CSR triples with sorted rows."""
    ap, ai, ax = a
    bp, bi, bx = b
    if _active == "compiled" and _small(ax) and _small(bx):
        if abs(alpha) * _maxabs(ax) + abs(beta) * _maxabs(bx) < LIMIT:
            return _ckernels.lincomb(n_rows, alpha, ap, ai, ax, beta, bp, bi, bx)
    return _pykernels.lincomb(n_rows, alpha, ap, ai, ax, beta, bp, bi, bx)
