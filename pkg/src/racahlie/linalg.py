"""Exact Gaussian elimination over RadicalNumber.

Vectors are sparse dicts ``{column_key: RadicalNumber}`` with no zero
values; column keys only need to be hashable and sortable. Pivots are
chosen among the cheapest entries to invert (single-term values first).
"""
from __future__ import annotations

from .radix import ONE, ZERO, RadicalNumber

__all__ = ["Span", "rank", "rref", "nullspace", "solve", "axpy"]


def axpy(y: dict, a: RadicalNumber, x: dict) -> dict:
    """Return ``y + a*x`` as a new sparse vector."""
    out = dict(y)
    for k, v in x.items():
        w = out.get(k, ZERO) + a * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _scale(x: dict, a: RadicalNumber) -> dict:
    return {k: v * a for k, v in x.items()} if a != ONE else dict(x)


def _pick_pivot(vec: dict):
    # cheapest inverse first, then smallest key for determinism
    return min(vec, key=lambda k: (len(vec[k].terms), k))


class Span:
    """Incrementally built span with exact coordinates.

    Stored rows are in echelon order: each row is zero at the pivots of the
    rows stored before it, so one pass in insertion order reduces a vector.
    """

    def __init__(self, vectors=()):
        self.vectors: list[dict] = []
        self._rows: list[tuple] = []  # (pivot, row with row[pivot] == 1, combo)
        for v in vectors:
            self.add(v)

    def __len__(self):
        return len(self.vectors)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, v: dict) -> tuple[dict, dict]:
        """``(coeffs, residual)`` with ``v = sum coeffs[i]*vectors[i] + residual``."""
        r = {k: x for k, x in v.items() if x}
        coeffs: dict[int, RadicalNumber] = {}
        for p, row, combo in self._rows:
            f = r.get(p)
            if f:
                r = axpy(r, -f, row)
                coeffs = axpy(coeffs, f, combo)
        return coeffs, r

    def coordinates(self, v: dict) -> dict | None:
        coeffs, r = self.reduce(v)
        return None if r else coeffs

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)[1]

    def add(self, v: dict) -> bool:
        """Append ``v``; return True if it enlarged the span."""
        idx = len(self.vectors)
        self.vectors.append(dict(v))
        coeffs, r = self.reduce(v)
        if not r:
            return False
        p = _pick_pivot(r)
        inv = r[p].reciprocal()
        combo = axpy({idx: ONE}, -ONE, coeffs)
        self._rows.append((p, _scale(r, inv), _scale(combo, inv)))
        return True


def rank(rows) -> int:
    return Span(rows).rank


def rref(rows) -> list[tuple]:
    """Fully reduced row echelon form as ``[(pivot, row), ...]``."""
    span = Span(rows)
    out = [(p, dict(row)) for p, row, _ in span._rows]
    # back-substitute so every pivot column is zero in every other row
    for i in range(len(out) - 1, -1, -1):
        p, row = out[i]
        for j in range(len(out)):
            if j != i:
                f = out[j][1].get(p)
                if f:
                    out[j] = (out[j][0], axpy(out[j][1], -f, row))
    return out


def nullspace(rows, columns) -> list[dict]:
    """Basis of ``{x : row . x = 0 for every row}`` over the given columns."""
    reduced = rref(rows)
    pivots = {p for p, _ in reduced}
    basis = []
    for f in columns:
        if f in pivots:
            continue
        x = {f: ONE}
        for p, row in reduced:
            c = row.get(f)
            if c:
                x[p] = -c
        basis.append(x)
    return basis


def solve(columns: list[dict], b: dict) -> list[RadicalNumber] | None:
    """Coefficients ``c`` with ``sum c[i]*columns[i] == b``, or None."""
    span = Span(columns)
    coeffs = span.coordinates(b)
    if coeffs is None:
        return None
    return [coeffs.get(i, ZERO) for i in range(len(columns))]


def matmul(a: list[list], b: list[list]) -> list[list]:
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            s = ZERO
            for k in range(m):
                if a[i][k] and b[k][j]:
                    s = s + a[i][k] * b[k][j]
            row.append(s)
        out.append(row)
    return out


def inverse(a: list[list]) -> list[list]:
    """Exact inverse of a square dense matrix (lists of RadicalNumber)."""
    n = len(a)
    cols = [{i: a[i][j] for i in range(n) if a[i][j]} for j in range(n)]
    span = Span(cols)
    if span.rank != n:
        raise ZeroDivisionError("matrix is singular")
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        c = span.coordinates({i: ONE})
        for j, v in c.items():
            out[j][i] = v
    return out


def determinant(a: list[list]) -> RadicalNumber:
    n = len(a)
    m = [[RadicalNumber(x) for x in row] for row in a]
    det = ONE
    for c in range(n):
        piv = None
        for r in range(c, n):
            if m[r][c] and (piv is None or len(m[r][c].terms) < len(m[piv][c].terms)):
                piv = r
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c]
        inv = m[c][c].reciprocal()
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] * inv
                m[r] = [m[r][k] - f * m[c][k] for k in range(n)]
    return det
