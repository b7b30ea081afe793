"""Coupled double tensors ``(a+ a)^{sigma k}_{pi q}`` of one shell.

    T = sum  <s ms s ms'|sigma pi> <l ml l ml'|k q>  a+_(ms,ml) A_(ms',ml')

where ``A`` is either the plain annihilator ``a_(ms',ml')`` or the
time-reversed one ``(-1)^(s + e*ms' + l + e*ml') a_(-ms',-ml')``; the
sign ``e`` is fixed by :class:`TensorConvention`. Only the tilde form is a
proper double tensor; the plain form is kept for comparison.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import NamedTuple

from .fock import FockSpace, SparseOperator
from .linalg import Span
from .radix import ZERO, RadicalNumber
from .wigner import HalfInt, cg

__all__ = [
    "DoubleTensorLabel",
    "TensorConvention",
    "TensorBasis",
    "build_double_tensor",
    "default_convention",
    "labels_for",
    "list_all",
    "one_body_coefficients",
]

S_HALF = HalfInt(1)
L_D = HalfInt(4)


class DoubleTensorLabel(NamedTuple):
    """``(sigma, k, pi, q)``; couplings of ``s x s`` and ``l x l`` are integral."""

    sigma: int
    k: int
    pi: int
    q: int

    def validate(self, s=S_HALF, l=L_D) -> "DoubleTensorLabel":
        s, l = HalfInt.of(s), HalfInt.of(l)
        if not 0 <= self.sigma <= s.twice:
            raise ValueError(f"sigma={self.sigma} outside 0..{s.twice} for s={s}")
        if not 0 <= self.k <= l.twice:
            raise ValueError(f"k={self.k} outside 0..{l.twice} for l={l}")
        if abs(self.pi) > self.sigma:
            raise ValueError(f"|pi|={abs(self.pi)} exceeds sigma={self.sigma}")
        if abs(self.q) > self.k:
            raise ValueError(f"|q|={abs(self.q)} exceeds k={self.k}")
        return self

    @classmethod
    def parse(cls, text: str) -> "DoubleTensorLabel":
        parts = [p for p in text.replace("[", "").replace("]", "").split(",")]
        if len(parts) != 4:
            raise ValueError(f"label {text!r} must be sigma,k,pi,q")
        return cls(*(int(p) for p in parts))

    def __str__(self):
        return f"W[{self.sigma},{self.k},{self.pi},{self.q}]"


@dataclass(frozen=True)
class TensorConvention:
    """Annihilation-operator convention entering the double tensor.

    tilde_phase
        Use the time-reversed annihilator (True) or the plain ``a`` (False).
    tilde_sign
        ``+1`` for the phase ``(-1)^(s+ms'+l+ml')``, ``-1`` for
        ``(-1)^(s-ms'+l-ml')``. For half-integer ``s`` the two differ by an
        overall sign of every tensor. Ignored when ``tilde_phase`` is False.
    """

    tilde_phase: bool = True
    tilde_sign: int = -1

    def __post_init__(self):
        if self.tilde_sign not in (1, -1):
            raise ValueError("tilde_sign must be +1 or -1")

    def to_dict(self) -> dict:
        return {"tilde_phase": self.tilde_phase, "tilde_sign": self.tilde_sign}

    @classmethod
    def from_dict(cls, d: dict) -> "TensorConvention":
        return cls(bool(d["tilde_phase"]), int(d.get("tilde_sign", -1)))

    def __str__(self):
        if not self.tilde_phase:
            return "plain"
        return "tilde(+)" if self.tilde_sign > 0 else "tilde(-)"


@lru_cache(maxsize=1)
def default_convention() -> TensorConvention:
    """The convention frozen in ``data/convention.json``."""
    text = resources.files("racahlie").joinpath("data/convention.json").read_text()
    return TensorConvention.from_dict(json.loads(text)["convention"])


def labels_for(s=S_HALF, l=L_D) -> list[DoubleTensorLabel]:
    s, l = HalfInt.of(s), HalfInt.of(l)
    return [
        DoubleTensorLabel(sigma, k, pi, q)
        for sigma in range(0, s.twice + 1)
        for k in range(0, l.twice + 1)
        for pi in range(-sigma, sigma + 1)
        for q in range(-k, k + 1)
    ]


@lru_cache(maxsize=None)
def _one_body(label: DoubleTensorLabel, conv: TensorConvention, ts: int, tl: int):
    out: dict[tuple, RadicalNumber] = {}
    s, l = HalfInt(ts), HalfInt(tl)
    for tms in range(ts, -ts - 1, -2):
        for tms2 in range(ts, -ts - 1, -2):
            cs = cg(s, HalfInt(tms), s, HalfInt(tms2), label.sigma, label.pi)
            if not cs:
                continue
            for tml in range(tl, -tl - 1, -2):
                for tml2 in range(tl, -tl - 1, -2):
                    co = cg(l, HalfInt(tml), l, HalfInt(tml2), label.k, label.q)
                    if not co:
                        continue
                    c = cs * co
                    if conv.tilde_phase:
                        e = conv.tilde_sign
                        phase = (ts + e * tms2) // 2 + (tl + e * tml2) // 2
                        if phase % 2:
                            c = -c
                        key = ((tms, tml), (-tms2, -tml2))
                    else:
                        key = ((tms, tml), (tms2, tml2))
                    out[key] = out.get(key, ZERO) + c
    return {k: v for k, v in out.items() if v}


def one_body_coefficients(label, conv=None, s=S_HALF, l=L_D) -> dict:
    """``{((2ms,2ml), (2ms',2ml')): c}`` with ``T = sum c a+_xi a_eta``."""
    conv = conv or default_convention()
    s, l = HalfInt.of(s), HalfInt.of(l)
    label = DoubleTensorLabel(*label).validate(s, l)
    return dict(_one_body(label, conv, s.twice, l.twice))


def build_double_tensor(label, conv=None, s=S_HALF, l=L_D, space: FockSpace | None = None) -> SparseOperator:
    """The double tensor as an operator on the full Fock space."""
    conv = conv or default_convention()
    space = space or _space(HalfInt.of(s).twice, HalfInt.of(l).twice)
    label = DoubleTensorLabel(*label).validate(space.s, space.l)
    key = ("T", label, conv)
    cached = space._cache.get(key)
    if cached is not None:
        return cached
    op = SparseOperator.zero(space.dim)
    for (xi, eta), c in sorted(one_body_coefficients(label, conv, space.s, space.l).items()):
        op = op + space.one_body(space.orbital(HalfInt(xi[0]), HalfInt(xi[1])),
                                 space.orbital(HalfInt(eta[0]), HalfInt(eta[1]))).scale(c)
    space._cache[key] = op
    return op


@lru_cache(maxsize=None)
def _space(ts: int, tl: int) -> FockSpace:
    return FockSpace(HalfInt(ts), HalfInt(tl))


def list_all(s=S_HALF, l=L_D, conv=None, space=None) -> list[tuple[DoubleTensorLabel, SparseOperator]]:
    return [(lab, build_double_tensor(lab, conv, s, l, space)) for lab in labels_for(s, l)]


class TensorBasis:
    """All double-tensor components of a shell, with exact basis expansion.

    A one-body operator is expanded by reading its matrix on the
    one-particle sector and inverting the change of basis between the
    components and the ``a+_i a_j``; the expansion is then re-assembled on
    the full Fock space and compared, so anything outside the span is
    detected rather than projected away.
    """

    def __init__(self, conv=None, s=S_HALF, l=L_D, space: FockSpace | None = None):
        self.conv = conv or default_convention()
        self.space = space or _space(HalfInt.of(s).twice, HalfInt.of(l).twice)
        self.labels = labels_for(self.space.s, self.space.l)
        self.coeffs = {lab: one_body_coefficients(lab, self.conv, self.space.s, self.space.l) for lab in self.labels}
        self._span = Span(self.change_of_basis_rows())
        self._inverse = None

    def operator(self, label) -> SparseOperator:
        return build_double_tensor(label, self.conv, space=self.space)

    def change_of_basis_rows(self) -> list[dict]:
        """One row per component, indexed by ``(i, j)`` orbital-index pairs."""
        idx = {o.key(): o.index for o in self.space.orbitals}
        return [
            {(idx[xi], idx[eta]): c for (xi, eta), c in self.coeffs[lab].items()}
            for lab in self.labels
        ]

    @property
    def rank(self) -> int:
        return self._span.rank

    def _inverse_rows(self):
        if self._inverse is None:
            n = self.space.n_orbitals
            if self.rank != n * n:
                raise ValueError(f"components span rank {self.rank}, not {n * n}")
            self._inverse = {}
            for i in range(n):
                for j in range(n):
                    c = self._span.coordinates({(i, j): RadicalNumber(1)})
                    self._inverse[(i, j)] = {self.labels[m]: v for m, v in c.items()}
        return self._inverse

    def one_particle_matrix(self, op: SparseOperator) -> dict:
        """``{(i, j): <i| op |j>}`` on single-occupancy states."""
        rows = [1 << i for i in range(self.space.n_orbitals)]
        block = op.row_block(rows)
        out = {}
        for (r, c), v in block.items():
            if c and not c & (c - 1):
                out[(r.bit_length() - 1, c.bit_length() - 1)] = v
        return out

    def expand(self, op: SparseOperator) -> dict | None:
        """``{label: coefficient}`` with ``op == sum c*T_label`` exactly, else None."""
        inv = self._inverse_rows()
        coeffs: dict = {}
        for ij, v in self.one_particle_matrix(op).items():
            for lab, w in inv[ij].items():
                x = coeffs.get(lab, ZERO) + v * w
                if x:
                    coeffs[lab] = x
                else:
                    coeffs.pop(lab, None)
        rebuilt = SparseOperator.zero(self.space.dim)
        for lab, c in sorted(coeffs.items()):
            rebuilt = rebuilt + self.operator(lab).scale(c)
        return coeffs if rebuilt.equals(op) else None
