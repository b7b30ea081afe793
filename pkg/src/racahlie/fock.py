"""Second quantization on the Fock space of one open ``l`` shell.

Operators are exact sparse matrices with :class:`RadicalNumber` entries.
Internally an operator is stored *graded by radicand*: a common positive
denominator ``den`` and, for every squarefree ``d``, an integer CSR matrix
``N_d`` so that the operator equals ``(1/den) * sum_d sqrt(d) * N_d``. This
form is canonical after dividing out the common gcd, so equality of two
operators is equality of their arrays. Products and sums run on integer
CSR kernels (see :mod:`racahlie.kernels`).

Basis states are occupation bitmasks; bit ``i`` is orbital ``i`` of the
space's ordering. Creation operators carry the Jordan-Wigner sign
``(-1)^(number of occupied orbitals with smaller index)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from . import kernels
from .radix import ZERO, RadicalNumber
from .wigner import HalfInt

__all__ = ["SpinOrbital", "FockSpace", "SparseOperator"]

_EMPTY_I = np.zeros(0, dtype=np.int64)


def _empty_csr(n):
    return (np.zeros(n + 1, dtype=np.int64), _EMPTY_I, _EMPTY_I)


def _csr_from_coo(n, rows, cols, vals):
    """CSR from coordinates with unique (row, col) pairs and nonzero values."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    big = any(abs(v) >= 2**62 for v in vals) if len(vals) else False
    vals = np.asarray(vals, dtype=object if big else np.int64)
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, rows + 1, 1)
    return (np.cumsum(indptr), cols, vals)


def _csr_to_coo(csr):
    indptr, indices, data = csr
    rows = np.repeat(np.arange(len(indptr) - 1, dtype=np.int64), np.diff(indptr))
    return rows, indices, data


def _gcd_data(data) -> int:
    if data.size == 0:
        return 0
    if data.dtype == object:
        return reduce(math.gcd, data.tolist(), 0)
    return int(np.gcd.reduce(np.abs(data)))


def _div_data(data, g):
    if data.dtype == object:
        out = np.array([v // g for v in data.tolist()], dtype=object)
        if all(abs(v) < 2**62 for v in out.tolist()):
            out = out.astype(np.int64)
        return out
    return data // g


class SparseOperator:
    """Exact sparse operator on a ``dim``-dimensional space."""

    __slots__ = ("dim", "den", "parts")
    __hash__ = None

    def __init__(self, dim: int, den: int = 1, parts: dict | None = None):
        self.dim = dim
        self.den = den
        self.parts = parts or {}
        self._normalize()

    def _normalize(self):
        self.parts = {d: c for d, c in self.parts.items() if c[1].size}
        if not self.parts:
            self.den = 1
            return
        if self.den < 0:
            self.parts = {d: (p, i, -x) for d, (p, i, x) in self.parts.items()}
            self.den = -self.den
        g = self.den
        for _, _, data in self.parts.values():
            g = math.gcd(g, _gcd_data(data))
            if g == 1:
                return
        self.den //= g
        self.parts = {d: (p, i, _div_data(x, g)) for d, (p, i, x) in self.parts.items()}

    # -- construction ---------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> "SparseOperator":
        return cls(dim)

    @classmethod
    def identity(cls, dim: int) -> "SparseOperator":
        idx = np.arange(dim, dtype=np.int64)
        return cls(dim, 1, {1: (np.arange(dim + 1, dtype=np.int64), idx, np.ones(dim, dtype=np.int64))})

    @classmethod
    def from_entries(cls, dim: int, entries) -> "SparseOperator":
        """Build from ``{(row, col): value}``; values are RadicalNumber or rational."""
        items = entries.items() if isinstance(entries, dict) else entries
        acc: dict[tuple[int, int], RadicalNumber] = {}
        for (r, c), v in items:
            if not (0 <= r < dim and 0 <= c < dim):
                raise IndexError(f"entry ({r}, {c}) outside dimension {dim}")
            acc[(r, c)] = acc.get((r, c), ZERO) + RadicalNumber(v)
        den = 1
        for v in acc.values():
            for _, q in v.items():
                den = den * q.denominator // math.gcd(den, q.denominator)
        coo: dict[int, tuple[list, list, list]] = {}
        for (r, c), v in acc.items():
            for d, q in v.items():
                rs, cs, xs = coo.setdefault(d, ([], [], []))
                rs.append(r)
                cs.append(c)
                xs.append(int(q * den))
        return cls(dim, den, {d: _csr_from_coo(dim, *t) for d, t in coo.items()})

    # -- inspection -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.parts

    def entries(self) -> dict[tuple[int, int], RadicalNumber]:
        out: dict[tuple[int, int], dict[int, Fraction]] = {}
        for d, csr in self.parts.items():
            rows, cols, data = _csr_to_coo(csr)
            for r, c, x in zip(rows.tolist(), cols.tolist(), data.tolist()):
                out.setdefault((r, c), {})[d] = Fraction(x, self.den)
        return {k: RadicalNumber._raw(v) for k, v in out.items()}

    @property
    def nnz(self) -> int:
        keys = set()
        for csr in self.parts.values():
            rows, cols, _ = _csr_to_coo(csr)
            keys.update(zip(rows.tolist(), cols.tolist()))
        return len(keys)

    def get(self, row: int, col: int) -> RadicalNumber:
        terms = {}
        for d, (indptr, indices, data) in self.parts.items():
            lo, hi = indptr[row], indptr[row + 1]
            k = lo + np.searchsorted(indices[lo:hi], col)
            if k < hi and indices[k] == col:
                terms[d] = Fraction(int(data[k]), self.den)
        return RadicalNumber._raw(terms)

    def row_block(self, rows) -> dict[tuple[int, int], RadicalNumber]:
        """Entries restricted to the given rows (all columns)."""
        out: dict[tuple[int, int], dict[int, Fraction]] = {}
        for d, (indptr, indices, data) in self.parts.items():
            for r in rows:
                for k in range(indptr[r], indptr[r + 1]):
                    out.setdefault((r, int(indices[k])), {})[d] = Fraction(int(data[k]), self.den)
        return {k: RadicalNumber._raw(v) for k, v in out.items()}

    # -- arithmetic -----------------------------------------------------
    def _check(self, other):
        if not isinstance(other, SparseOperator):
            raise TypeError(f"expected SparseOperator, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._check(other)
        return _combine(self, 1, other, 1)

    def __sub__(self, other):
        self._check(other)
        return _combine(self, 1, other, -1)

    def __neg__(self):
        return SparseOperator(self.dim, -self.den, dict(self.parts))

    def scale(self, c) -> "SparseOperator":
        c = RadicalNumber(c)
        if not c or not self.parts:
            return SparseOperator(self.dim)
        terms = c.items()
        L = reduce(lambda a, b: a * b // math.gcd(a, b), (q.denominator for _, q in terms), 1)
        acc: dict[int, tuple] = {}
        for dc, q in terms:
            k = q.numerator * (L // q.denominator)
            for d, csr in self.parts.items():
                g = math.gcd(dc, d)
                nd = (dc // g) * (d // g)
                _accumulate(acc, self.dim, nd, k * g, csr)
        return SparseOperator(self.dim, self.den * L, acc)

    def __mul__(self, c):
        if isinstance(c, SparseOperator):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def compose(self, other) -> "SparseOperator":
        self._check(other)
        acc: dict[int, tuple] = {}
        n = self.dim
        for d1, a in self.parts.items():
            for d2, b in other.parts.items():
                prod = kernels.spgemm(n, n, a, b)
                if d1 == d2:
                    _accumulate(acc, n, 1, d1, prod)
                else:
                    g = math.gcd(d1, d2)
                    _accumulate(acc, n, (d1 // g) * (d2 // g), g, prod)
        return SparseOperator(n, self.den * other.den, acc)

    __matmul__ = compose

    def transpose(self) -> "SparseOperator":
        parts = {}
        for d, csr in self.parts.items():
            rows, cols, data = _csr_to_coo(csr)
            parts[d] = _csr_from_coo(self.dim, cols, rows, data.tolist())
        return SparseOperator(self.dim, self.den, parts)

    @property
    def T(self):
        return self.transpose()

    def restrict(self, states) -> "SparseOperator":
        """Submatrix on the listed basis states, reindexed ``0..len(states)-1``."""
        states = np.asarray(states, dtype=np.int64)
        where = np.full(self.dim, -1, dtype=np.int64)
        where[states] = np.arange(len(states))
        parts = {}
        for d, csr in self.parts.items():
            rows, cols, data = _csr_to_coo(csr)
            keep = (where[rows] >= 0) & (where[cols] >= 0)
            parts[d] = _csr_from_coo(len(states), where[rows[keep]], where[cols[keep]], data[keep].tolist())
        return SparseOperator(len(states), self.den, parts)

    def equals(self, other) -> bool:
        self._check(other)
        if self.den != other.den or self.parts.keys() != other.parts.keys():
            return False
        for d, (p, i, x) in self.parts.items():
            q, j, y = other.parts[d]
            if not (np.array_equal(p, q) and np.array_equal(i, j) and np.array_equal(x, y)):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, SparseOperator):
            return NotImplemented
        return self.dim == other.dim and self.equals(other)

    def dump(self) -> str:
        """``row col value`` lines, one per nonzero entry, sorted."""
        lines = [f"{r} {c} {v}" for (r, c), v in sorted(self.entries().items())]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def load(cls, dim: int, text: str) -> "SparseOperator":
        from .radix import parse

        entries = {}
        for line in text.splitlines():
            if line.strip():
                r, c, v = line.split(" ", 2)
                entries[(int(r), int(c))] = parse(v)
        return cls.from_entries(dim, entries)

    def __repr__(self):
        return f"SparseOperator(dim={self.dim}, nnz={self.nnz}, radicands={sorted(self.parts)})"


def _accumulate(acc, n, d, factor, csr):
    prev = acc.get(d)
    if prev is None:
        if factor == 1:
            acc[d] = csr
        else:
            acc[d] = kernels.lincomb(n, factor, csr, 0, _empty_csr(n))
    else:
        acc[d] = kernels.lincomb(n, 1, prev, factor, csr)


def _combine(x, a, y, b):
    n = x.dim
    L = x.den * y.den // math.gcd(x.den, y.den)
    fx, fy = a * (L // x.den), b * (L // y.den)
    parts = {}
    for d in set(x.parts) | set(y.parts):
        parts[d] = kernels.lincomb(
            n, fx, x.parts.get(d, _empty_csr(n)), fy, y.parts.get(d, _empty_csr(n))
        )
    return SparseOperator(n, L, parts)


def commutator(x: SparseOperator, y: SparseOperator) -> SparseOperator:
    return x @ y - y @ x


def anticommutator(x: SparseOperator, y: SparseOperator) -> SparseOperator:
    return x @ y + y @ x


@dataclass(frozen=True)
class SpinOrbital:
    ms: HalfInt
    ml: HalfInt
    index: int

    def key(self) -> tuple[int, int]:
        return (self.ms.twice, self.ml.twice)


def canonical_orbitals(s=HalfInt(1), l=HalfInt(4)) -> list[tuple[int, int]]:
    """(2ms, 2ml) pairs: ms descending, then ml descending."""
    s, l = HalfInt.of(s), HalfInt.of(l)
    return [
        (tms, tml)
        for tms in range(s.twice, -s.twice - 1, -2)
        for tml in range(l.twice, -l.twice - 1, -2)
    ]


class FockSpace:
    """Fock space of the ``(2s+1)(2l+1)`` spin-orbitals of one shell.

    ``ordering`` optionally permutes the canonical orbital list; it decides
    which bit each orbital occupies and therefore the Jordan-Wigner signs.
    """

    def __init__(self, s=HalfInt(1), l=HalfInt(4), ordering: str | list | None = None):
        self.s, self.l = HalfInt.of(s), HalfInt.of(l)
        keys = canonical_orbitals(self.s, self.l)
        if ordering == "reversed":
            keys = keys[::-1]
        elif ordering is not None and ordering != "canonical":
            if sorted(ordering) != sorted(keys):
                raise ValueError("ordering must be a permutation of the shell's orbitals")
            keys = list(ordering)
        self.orbitals = [SpinOrbital(HalfInt(a), HalfInt(b), i) for i, (a, b) in enumerate(keys)]
        self._by_key = {o.key(): o for o in self.orbitals}
        self.n_orbitals = len(self.orbitals)
        self.dim = 1 << self.n_orbitals
        self._cache: dict = {}

    def orbital(self, ms, ml) -> SpinOrbital:
        key = (HalfInt.of(ms).twice, HalfInt.of(ml).twice)
        try:
            return self._by_key[key]
        except KeyError:
            raise ValueError(f"no orbital with ms={ms}, ml={ml} in this shell") from None

    def _index(self, orb) -> int:
        if isinstance(orb, SpinOrbital):
            if self._by_key.get(orb.key()) != orb:
                raise ValueError(f"{orb} does not belong to this space's ordering")
            return orb.index
        i = int(orb)
        if not 0 <= i < self.n_orbitals:
            raise ValueError(f"orbital index {i} out of range")
        return i

    def vacuum(self) -> int:
        return 0

    def sector(self, n_particles: int) -> np.ndarray:
        states = np.arange(self.dim, dtype=np.int64)
        return states[np.bitwise_count(states) == n_particles]

    def create(self, orb) -> SparseOperator:
        i = self._index(orb)
        key = ("c", i)
        if key not in self._cache:
            states = np.arange(self.dim, dtype=np.int64)
            free = states[(states >> i) & 1 == 0]
            below = np.bitwise_count(free & ((1 << i) - 1)).astype(np.int64)
            signs = np.where(below % 2 == 1, -1, 1)
            csr = _csr_from_coo(self.dim, free | (1 << i), free, signs.tolist())
            self._cache[key] = SparseOperator(self.dim, 1, {1: csr})
        return self._cache[key]

    def annihilate(self, orb) -> SparseOperator:
        i = self._index(orb)
        key = ("a", i)
        if key not in self._cache:
            self._cache[key] = self.create(i).transpose()
        return self._cache[key]

    def one_body(self, i, j) -> SparseOperator:
        """``a+_i a_j`` as a composed product."""
        i, j = self._index(i), self._index(j)
        key = ("e", i, j)
        if key not in self._cache:
            self._cache[key] = self.create(i) @ self.annihilate(j)
        return self._cache[key]

    def number(self) -> SparseOperator:
        return reduce(lambda a, b: a + b, (self.one_body(i, i) for i in range(self.n_orbitals)))

    def basis_state(self, occupied) -> int:
        mask = 0
        for o in occupied:
            mask |= 1 << self._index(o)
        return mask
