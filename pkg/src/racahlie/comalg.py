"""Closed-form commutators of double tensors and their Fock-space check.

For two components of the same shell the commutator closes on the
double tensors again:

    [T^{sk}_{pq}, T^{s'k'}_{p'q'}] = sum_{s'',k''} sqrt((2s+1)(2s'+1)(2k+1)(2k'+1))
        * P(s,k,s',k',s'',k'')
        * <s p s' p'|s'' p+p'> <k q k' q'|k'' q+q'>
        * W(s s' S S; s'' S) W(k k' L L; k'' L) * T^{s''k''}_{p+p', q+q'}

with ``S``, ``L`` the one-electron spin and orbital momenta. The parity
factor is ``P = 1 - (-1)^(s+k+s'+k'+s''+k'')`` for the ``tilde_sign=-1``
tensors; the ``+1`` tensors differ from those by ``(-1)^(2S+2L)`` each,
which rescales every structure constant by the same sign. Passing
``raw=True`` evaluates the factor as ``(-1)^(s+k+s'+k') - (-1)^(s''+k'')``
with no convention sign, which differs from the operator commutator by
``(-1)^(s+k+s'+k')`` pair by pair.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .fock import commutator as op_commutator
from .linalg import Span
from .radix import ZERO, RadicalNumber, parse, sqrt_rational
from .tensor import (
    L_D,
    S_HALF,
    DoubleTensorLabel,
    TensorBasis,
    TensorConvention,
    default_convention,
    labels_for,
)
from .wigner import HalfInt, cg, racah_w

__all__ = [
    "TensorPolynomial",
    "StructureConstants",
    "ClosureError",
    "BasisExpansionError",
    "Verification",
    "commutator_closed_form",
    "commutator_poly",
    "verify_against_fock",
    "verify_all",
    "structure_constants",
]


class TensorPolynomial:
    """Finite exact linear combination of double-tensor components."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        out = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for lab, c in items:
            lab = DoubleTensorLabel(*lab)
            c = out.get(lab, ZERO) + RadicalNumber(c)
            if c:
                out[lab] = c
            else:
                out.pop(lab, None)
        self._terms = out

    @classmethod
    def single(cls, label, coeff=1) -> "TensorPolynomial":
        return cls({DoubleTensorLabel(*label): coeff})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def labels(self):
        return sorted(self._terms)

    def __getitem__(self, label):
        return self._terms.get(DoubleTensorLabel(*label), ZERO)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, TensorPolynomial):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        out = dict(self._terms)
        for lab, c in other._terms.items():
            v = out.get(lab, ZERO) + c
            if v:
                out[lab] = v
            else:
                out.pop(lab, None)
        p = TensorPolynomial()
        p._terms = out
        return p

    def __neg__(self):
        p = TensorPolynomial()
        p._terms = {lab: -c for lab, c in self._terms.items()}
        return p

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = RadicalNumber(c)
        p = TensorPolynomial()
        p._terms = {lab: v * c for lab, v in self._terms.items()} if c else {}
        return p

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * RadicalNumber(c).reciprocal()

    def __str__(self):
        if not self._terms:
            return "0"
        out = ""
        for lab, c in self.items():
            if len(c.terms) > 1:
                piece, neg = f"({c}) * {lab}", False
            else:
                neg = c < 0
                piece = f"{-c if neg else c} * {lab}"
            if not out:
                out = f"-{piece}" if neg else piece
            else:
                out += f" - {piece}" if neg else f" + {piece}"
        return out

    def __repr__(self):
        return f"TensorPolynomial({self})"

    def to_json(self) -> list:
        return [{"label": list(lab), "coeff": str(c)} for lab, c in self.items()]

    @classmethod
    def from_json(cls, data) -> "TensorPolynomial":
        return cls({tuple(t["label"]): parse(t["coeff"]) for t in data})


def _convention_sign(conv: TensorConvention, ts: int, tl: int) -> int:
    if conv.tilde_phase and conv.tilde_sign > 0 and (ts + tl) % 2:
        return -1
    return 1


def commutator_closed_form(a, b, conv=None, s=S_HALF, l=L_D, raw=False) -> TensorPolynomial:
    """Commutator of two components from the recoupling formula."""
    conv = conv or default_convention()
    s, l = HalfInt.of(s), HalfInt.of(l)
    a = DoubleTensorLabel(*a).validate(s, l)
    b = DoubleTensorLabel(*b).validate(s, l)
    return _closed(a, b, conv, s.twice, l.twice, raw)


@lru_cache(maxsize=None)
def _closed(a, b, conv, ts, tl, raw) -> TensorPolynomial:
    s, l = HalfInt(ts), HalfInt(tl)
    pi2, q2 = a.pi + b.pi, a.q + b.q
    outer = a.sigma + a.k + b.sigma + b.k
    dims = sqrt_rational((2 * a.sigma + 1) * (2 * b.sigma + 1) * (2 * a.k + 1) * (2 * b.k + 1))
    sign = 1 if raw else _convention_sign(conv, ts, tl)
    terms = {}
    for sig2 in range(abs(a.sigma - b.sigma), a.sigma + b.sigma + 1):
        if abs(pi2) > sig2:
            continue
        for k2 in range(abs(a.k - b.k), a.k + b.k + 1):
            if abs(q2) > k2:
                continue
            if raw:
                parity = (-1) ** outer - (-1) ** (sig2 + k2)
            else:
                parity = 1 - (-1) ** (outer + sig2 + k2)
            if not parity:
                continue
            c = (
                cg(a.sigma, a.pi, b.sigma, b.pi, sig2, pi2)
                * cg(a.k, a.q, b.k, b.q, k2, q2)
            )
            if not c:
                continue
            c = c * racah_w(a.sigma, b.sigma, s, s, sig2, s) * racah_w(a.k, b.k, l, l, k2, l)
            if c:
                terms[DoubleTensorLabel(sig2, k2, pi2, q2)] = c * dims * (parity * sign)
    return TensorPolynomial(terms)


def commutator_poly(x: TensorPolynomial, y: TensorPolynomial, conv=None, s=S_HALF, l=L_D) -> TensorPolynomial:
    """Bilinear extension of :func:`commutator_closed_form`."""
    out = TensorPolynomial()
    for la, ca in x.items():
        for lb, cb in y.items():
            r = commutator_closed_form(la, lb, conv, s, l)
            if r:
                out = out + r * (ca * cb)
    return out


class BasisExpansionError(ValueError):
    """An operator commutator fell outside the span of the components."""


class ClosureError(ValueError):
    def __init__(self, pair, residual):
        self.pair = pair
        self.residual = residual
        super().__init__(f"commutator of basis elements {pair} leaves the span; residual {residual}")


@dataclass
class Verification:
    a: DoubleTensorLabel
    b: DoubleTensorLabel
    verdict: str  # "equal" | "ratio" | "mismatch"
    oracle: TensorPolynomial
    closed: TensorPolynomial
    ratio: RadicalNumber | None = None

    @property
    def tag(self) -> str:
        if self.verdict == "ratio":
            return f"ratio:{self.ratio}"
        return self.verdict


def compare(oracle: TensorPolynomial, closed: TensorPolynomial) -> tuple[str, RadicalNumber | None]:
    if oracle == closed:
        return "equal", None
    if not oracle or not closed or set(oracle.labels()) != set(closed.labels()):
        return "mismatch", None
    lab0 = oracle.labels()[0]
    r = oracle[lab0] / closed[lab0]
    if all(oracle[lab] == r * closed[lab] for lab in oracle.labels()):
        return "ratio", r
    return "mismatch", None


_BASES: dict = {}


def tensor_basis(conv=None, s=S_HALF, l=L_D, ordering=None) -> TensorBasis:
    from .fock import FockSpace

    conv = conv or default_convention()
    s, l = HalfInt.of(s), HalfInt.of(l)
    key = (conv, s.twice, l.twice, ordering)
    if key not in _BASES:
        space = FockSpace(s, l, ordering=ordering) if ordering else None
        _BASES[key] = TensorBasis(conv, s, l, space=space)
    return _BASES[key]


def fock_commutator(a, b, basis: TensorBasis) -> TensorPolynomial:
    """Matrix commutator on the Fock space, expanded in the components."""
    op = op_commutator(basis.operator(a), basis.operator(b))
    coeffs = basis.expand(op)
    if coeffs is None:
        raise BasisExpansionError(f"[{a}, {b}] is not a combination of double tensors")
    return TensorPolynomial(coeffs)


def verify_against_fock(a, b, conv=None, s=S_HALF, l=L_D, raw=False, basis=None) -> Verification:
    conv = conv or default_convention()
    basis = basis or tensor_basis(conv, s, l)
    a = DoubleTensorLabel(*a).validate(basis.space.s, basis.space.l)
    b = DoubleTensorLabel(*b).validate(basis.space.s, basis.space.l)
    oracle = fock_commutator(a, b, basis)
    closed = commutator_closed_form(a, b, conv, basis.space.s, basis.space.l, raw=raw)
    verdict, ratio = compare(oracle, closed)
    return Verification(a, b, verdict, oracle, closed, ratio)


@dataclass
class SweepSummary:
    convention: TensorConvention
    raw: bool
    pairs: int = 0
    counts: dict = field(default_factory=dict)
    ratios: set = field(default_factory=set)
    mismatches: list = field(default_factory=list)

    @property
    def uniform_ratio(self) -> RadicalNumber | None:
        """The single global ratio if every nonzero pair agrees up to it."""
        if self.mismatches:
            return None
        rs = set(self.ratios)
        if self.counts.get("equal-nonzero"):
            rs.add(RadicalNumber(1))
        return next(iter(rs)) if len(rs) == 1 else None

    def to_json(self) -> dict:
        r = self.uniform_ratio
        return {
            "convention": self.convention.to_dict(),
            "raw_formula": self.raw,
            "pairs": self.pairs,
            "counts": dict(sorted(self.counts.items())),
            "ratios": sorted(str(x) for x in self.ratios),
            "global_ratio": None if r is None else str(r),
            "mismatches": [[list(a), list(b)] for a, b in self.mismatches[:50]],
        }


def verify_all(conv=None, s=S_HALF, l=L_D, labels=None, raw=False, basis=None, progress=None) -> SweepSummary:
    """Oracle sweep over all ordered pairs of the given labels."""
    conv = conv or default_convention()
    basis = basis or tensor_basis(conv, s, l)
    labels = labels or labels_for(basis.space.s, basis.space.l)
    summary = SweepSummary(conv, raw)
    for i, a in enumerate(labels):
        for b in labels:
            v = verify_against_fock(a, b, conv, raw=raw, basis=basis)
            summary.pairs += 1
            key = v.verdict
            if v.verdict == "equal":
                key = "equal-nonzero" if v.oracle else "equal-zero"
            elif v.verdict == "ratio":
                summary.ratios.add(v.ratio)
            else:
                summary.mismatches.append((a, b))
            summary.counts[key] = summary.counts.get(key, 0) + 1
        if progress:
            progress(i + 1, len(labels))
    return summary


@dataclass
class StructureConstants:
    """``[basis[x], basis[y]] = sum_z c[x][y][z] basis[z]``."""

    basis: list
    c: list
    names: list | None = None

    def __len__(self):
        return len(self.basis)

    def ad(self, x) -> list[list[RadicalNumber]]:
        """Matrix of ``ad`` of the coordinate vector ``x`` (column convention)."""
        n = len(self.basis)
        if isinstance(x, int):
            x = [RadicalNumber(1) if i == x else ZERO for i in range(n)]
        m = [[ZERO] * n for _ in range(n)]
        for i, xi in enumerate(x):
            if not xi:
                continue
            for y in range(n):
                for z, v in enumerate(self.c[i][y]):
                    if v:
                        m[z][y] = m[z][y] + xi * v
        return m

    def bracket(self, x, y) -> list[RadicalNumber]:
        n = len(self.basis)
        out = [ZERO] * n
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                f = xi * yj
                for z, v in enumerate(self.c[i][j]):
                    if v:
                        out[z] = out[z] + f * v
        return out

    def element(self, x) -> TensorPolynomial:
        out = TensorPolynomial()
        for xi, b in zip(x, self.basis):
            if xi:
                out = out + b * xi
        return out


def _vec(p: TensorPolynomial) -> dict:
    return p.terms


def structure_constants(basis, conv=None, s=S_HALF, l=L_D, names=None, bracket=None) -> StructureConstants:
    """Exact structure constants; raises ClosureError if the span is not closed."""
    basis = list(basis)
    n = len(basis)
    span = Span(_vec(b) for b in basis)
    if span.rank != n:
        raise ValueError(f"basis elements are linearly dependent (rank {span.rank} < {n})")
    br = bracket or (lambda x, y: commutator_poly(x, y, conv, s, l))
    c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            r = br(basis[i], basis[j])
            coeffs, residual = span.reduce(_vec(r))
            if residual:
                raise ClosureError((i, j), TensorPolynomial(residual))
            for z, v in coeffs.items():
                c[i][j][z] = v
                c[j][i][z] = -v
    return StructureConstants(basis, c, names)
