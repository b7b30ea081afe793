"""Published reference relations and their comparison with generated values.

The reference values are stored as data with the labels they most plausibly
refer to. Several printed lines have ambiguous sub- and superscripts; for
those only the coefficient pattern is given and the generator searches the
sigma = 0, odd-k table for the nearest entry. The generated table is
authoritative throughout; this module only reports agreement.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .comalg import TensorPolynomial, commutator_closed_form, commutator_poly
from .lieclass import B_SCALE, JF_NAMES, build_jf_basis
from .linalg import Span
from .radix import ONE, ZERO, RadicalNumber, sqrt_rational
from .tensor import DoubleTensorLabel, default_convention

__all__ = ["LadderEntry", "PatternEntry", "REFERENCE_LINES", "JF_RELATIONS", "format_combination", "render"]

INV_2SQRT5 = sqrt_rational(Fraction(1, 20))  # 1/(2*sqrt(5)) = 0.2236...


def T(k, q) -> DoubleTensorLabel:
    return DoubleTensorLabel(0, k, 0, q)


@dataclass(frozen=True)
class LadderEntry:
    """A line whose labels are unambiguous: ``[a, b] = sum c * label``."""

    printed: str
    a: DoubleTensorLabel
    b: DoubleTensorLabel
    rhs: tuple  # ((label, RadicalNumber), ...)
    decimal: float | None = None
    note: str = ""


@dataclass(frozen=True)
class PatternEntry:
    """A line where only the ranks and coefficients can be read reliably.

    ``rhs_by_k`` maps k'' to the printed coefficient; the search accepts any
    pair with the given ranks whose result has one component per k''.
    """

    printed: str
    ranks: tuple  # (k, k')
    rhs_by_k: tuple  # ((k'', RadicalNumber), ...)
    note: str = ""


REFERENCE_LINES = [
    LadderEntry("[T(0,1;0,1), T(0,1;0,-1)] = 0.2236 T(0,1;0,0) = 1/(2 sqrt 5) T(0,1;0,0)",
                T(1, 1), T(1, -1), ((T(1, 0), INV_2SQRT5),), 0.2236),
    LadderEntry("[T(0,1;0,1), T(0,1;0,0)] = 0.2236 T(0,1;0,1)",
                T(1, 1), T(1, 0), ((T(1, 1), INV_2SQRT5),), 0.2236),
    LadderEntry("[T(0,1;0,-1), T(0,1;0,0)] = -0.2236 T(0,1;0,-1)",
                T(1, -1), T(1, 0), ((T(1, -1), -INV_2SQRT5),), -0.2236,
                "the exact form printed beside the decimal has the opposite sign"),
    PatternEntry("[k=3, k=3] = -3/(2 sqrt 5) T(k=1) + 1/(2 sqrt 5) T(k=3)",
                 (3, 3), ((1, -3 * INV_2SQRT5), (3, INV_2SQRT5))),
    PatternEntry("[k=3, k=3] = 1/sqrt 5 T(k=1) + 1/(2 sqrt 5) T(k=3)",
                 (3, 3), ((1, 2 * INV_2SQRT5), (3, INV_2SQRT5))),
    PatternEntry("[k=3, k=3] = -1/(2 sqrt 5) T(k=1) + 1/(2 sqrt 5) T(k=3)",
                 (3, 3), ((1, -INV_2SQRT5), (3, INV_2SQRT5))),
    *[
        LadderEntry(f"[T(0,1;0,0), T(0,3;0,q)] = -q/(2 sqrt 5) T(0,3;0,q), q={q}",
                    T(1, 0), T(3, q), ((T(3, q), -q * INV_2SQRT5),) if q else ())
        for q in range(-3, 4)
    ],
    *[
        LadderEntry(
            f"[T(0,1;0,{e}), T(0,3;0,q)] = {'+' if e > 0 else '-'}(1/(2 sqrt 5)) sqrt((3{'-' if e > 0 else '+'}q)"
            f"(3{'+' if e > 0 else '-'}q+1)) T(0,3;0,q{'+' if e > 0 else '-'}1), q={q}",
            T(1, e), T(3, q),
            ((T(3, q + e), e * INV_2SQRT5 * sqrt_rational((3 - e * q) * (4 + e * q))),),
        )
        for e in (1, -1)
        for q in range(-3, 4)
        if abs(q + e) <= 3
    ],
    PatternEntry("[k=1, T(0,3;0,-2)] = -sqrt 3/(2 sqrt 5) T(k=3)", (1, 3),
                 ((3, -sqrt_rational(3) * INV_2SQRT5),)),
    PatternEntry("[k=3, k=3] = -1/(2 sqrt 15) T(k=1 or 3)", (3, 3),
                 ((1, -sqrt_rational(Fraction(1, 60))),),
                 "the component labels of this reference line are ambiguous"),
]


def _compare(printed: RadicalNumber, got: RadicalNumber) -> str:
    if printed == got:
        return "equal"
    if printed == -got:
        return "negated"
    return f"ratio {printed / got}" if got else "absent"


def _ladder_row(e: LadderEntry, conv) -> dict:
    got = commutator_closed_form(e.a, e.b, conv)
    want = TensorPolynomial(dict(e.rhs))
    if got == want:
        verdict = "equal"
    elif got == -want:
        verdict = "negated"
    elif set(got.labels()) == set(want.labels()) and got:
        lab = got.labels()[0]
        r = want[lab] / got[lab]
        verdict = f"ratio {r}" if want == got * r else "differs"
    else:
        verdict = "differs"
    out = {"printed": e.printed, "generated": f"[{e.a}, {e.b}] = {got}", "verdict": verdict, "note": e.note}
    if e.decimal is not None and got:
        c = got[e.rhs[0][0]]
        out["decimal"] = f"{float(c):.6f} vs printed {e.decimal} (|diff| {abs(float(c) - e.decimal):.1e})"
    return out


def _collapse(p: TensorPolynomial) -> dict | None:
    by_k: dict = {}
    for lab, c in p.items():
        if lab.k in by_k:
            return None
        by_k[lab.k] = c
    return by_k


def _pattern_row(e: PatternEntry, conv) -> dict:
    k1, k2 = e.ranks
    want = dict(e.rhs_by_k)
    rank = {"equal": 0, "negated": 1}
    best, best_rank = [], 9
    for q1, q2 in itertools.product(range(-k1, k1 + 1), range(-k2, k2 + 1)):
        a, b = T(k1, q1), T(k2, q2)
        got = commutator_closed_form(a, b, conv)
        by_k = _collapse(got)
        if by_k is None or set(by_k) != set(want):
            continue
        verdicts = {_compare(want[k], by_k[k]) for k in want}
        v = verdicts.pop() if len(verdicts) == 1 else "differs"
        r = rank.get(v, 2 if v.startswith("ratio") else 3)
        if r < best_rank:
            best, best_rank = [], r
        if r == best_rank:
            best.append((v, f"[{a}, {b}] = {got}"))
    if not best or best_rank >= 2:
        return {"printed": e.printed, "generated": _nearest(e, conv), "verdict": "no match", "note": e.note}
    return {
        "printed": e.printed,
        "generated": "; ".join(g for _, g in best[:2]) + (f" (+{len(best) - 2} more)" if len(best) > 2 else ""),
        "verdict": best[0][0],
        "note": e.note,
    }


def _nearest(e: PatternEntry, conv) -> str:
    """Closest entry by coefficient magnitudes, ignoring signs."""
    k1, k2 = e.ranks
    want = {k: abs(c) for k, c in e.rhs_by_k}
    for q1, q2 in itertools.product(range(-k1, k1 + 1), range(-k2, k2 + 1)):
        got = commutator_closed_form(T(k1, q1), T(k2, q2), conv)
        by_k = _collapse(got)
        if by_k is not None and {k: abs(c) for k, c in by_k.items()} == want:
            return f"same magnitudes, different signs: [{T(k1, q1)}, {T(k2, q2)}] = {got}"
    target = float(next(iter(want.values())))
    mags = {abs(c) for q1, q2 in itertools.product(range(-k1, k1 + 1), range(-k2, k2 + 1))
            for _, c in commutator_closed_form(T(k1, q1), T(k2, q2), conv).items()}
    if not mags:
        return "no nonzero terms"
    m = min(mags, key=lambda x: abs(float(x) - target))
    return f"no term of this size; nearest magnitude {m} ≈ {float(m):.4f}"


# -- J/F relations -------------------------------------------------------------

JF_RELATIONS = [
    ("J0", "J1", {"J1": ONE}),
    ("J0", "J-1", {"J-1": ONE}),
    ("J1", "J-1", {"J0": ONE}),
    ("F1", "F-1", {"J0": sqrt_rational(2), "F0": sqrt_rational(2)}),
    ("F2", "F-2", {"F0": ONE}),
    ("F3", "F-3", {"J0": -sqrt_rational(2), "F0": sqrt_rational(2)}),
]


def format_combination(coeffs: dict, names) -> str:
    parts = []
    for name in names:
        c = coeffs.get(name)
        if not c:
            continue
        neg = len(c.terms) == 1 and c < 0
        mag = -c if neg else c
        body = name if mag == ONE else (f"({mag})*{name}" if len(mag.terms) > 1 else f"{mag}*{name}")
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts) or "0"


def jf_bracket(jf, x: str, y: str, conv=None) -> dict | None:
    """``[x, y]`` as ``{name: coefficient}`` in the J/F basis, or None if outside it."""
    span = Span(jf.elements[n].terms for n in JF_NAMES)
    r = commutator_poly(jf.elements[x], jf.elements[y], conv)
    c = span.coordinates(r.terms)
    if c is None:
        return None
    return {JF_NAMES[i]: v for i, v in c.items()}


def _jf_verdict(got, want) -> str:
    if got is None:
        return "outside span"
    if got == want:
        return "equal"
    if set(got) == set(want):
        k = next(iter(want))
        r = want[k] / got[k]
        if all(want[n] == r * got[n] for n in want):
            return "negated" if r == -ONE else f"ratio {r}"
    return "differs"


def jf_rows(mixtures: str, conv=None) -> list[dict]:
    jf = build_jf_basis(conv, mixtures)
    rows = []
    for x, y, want in JF_RELATIONS:
        got = jf_bracket(jf, x, y, conv)
        got_text = format_combination(got, JF_NAMES) if got is not None else "outside span"
        want_text = format_combination(want, JF_NAMES)
        rows.append({
            "relation": f"[{x}, {y}]",
            "printed": want_text,
            "generated": got_text,
            "verdict": _jf_verdict(got, want),
        })
    return rows


def _table(rows, cols) -> list[str]:
    out = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    for r in rows:
        out.append("| " + " | ".join(str(r.get(c, "")).replace("|", "\\|") for c in cols) + " |")
    return out


def render(conv=None) -> str:
    """Markdown comparison document."""
    conv = conv or default_convention()
    lines = [
        "# Reference relations versus the generated table",
        "",
        f"Generated by `racahlie reference` under the `{conv}` convention. "
        "Exact values come from the closed-form commutator, which agrees with the "
        "Fock-space oracle on every pair (see `results/oracle_sweep.json`). "
        "`T(sigma,k;pi,q)` is the double-tensor component `W[sigma,k,pi,q]`.",
        "",
        "## Component commutators",
        "",
        "`negated` means the generated value is the printed one times -1, which is what the "
        "other sign of the time-reversal phase would give for every structure constant at once.",
        "",
    ]
    rows = []
    for e in REFERENCE_LINES:
        rows.append(_ladder_row(e, conv) if isinstance(e, LadderEntry) else _pattern_row(e, conv))
    lines += _table(rows, ["printed", "generated", "verdict", "decimal", "note"])
    lines += [
        "",
        f"## J/F basis (b = {B_SCALE})",
        "",
        "J_q = b T(0,1;0,q) and F_q = b T(0,3;0,q) for |q| <= 1. "
        "F(+-2) and F(+-3) mix T(0,3;0,+-2) and T(0,3;0,+-3).",
        "",
    ]
    eig = build_jf_basis(conv, "eigen")
    mix_rows = []
    printed_mix = {"F2": ("3/5", "2/5"), "F3": ("2/5", "3/5"), "F-2": ("3/5", "2/5"), "F-3": ("2/5", "3/5")}
    for name in ("F2", "F3", "F-2", "F-3"):
        c2, c3 = eig.mixtures[name]
        mix_rows.append({
            "element": name,
            "printed (|q|=2, |q|=3)": ", ".join(printed_mix[name]),
            "root-vector mixture": f"{c2}, {c3}",
        })
    lines += _table(mix_rows, ["element", "printed (|q|=2, |q|=3)", "root-vector mixture"])
    lines += [
        "",
        "With J0 and F0 as the Cartan subalgebra the |q|=2 and |q|=3 components are already "
        "root vectors, so neither the 3/5, 2/5 reading nor the sqrt(3/5), sqrt(2/5) reading "
        "gives ad-eigenvectors. No root vector is a multiple of F0 either, which is why some "
        "printed F relations cannot hold with F0 fixed as b T(0,3;0,0).",
        "",
    ]
    for mixtures, title in (("eigen", "root-vector mixtures"), ("printed", "printed 3/5, 2/5 mixtures")):
        lines += [f"### Relations with {title}", ""]
        lines += _table(jf_rows(mixtures, conv), ["relation", "printed", "generated", "verdict"])
        lines.append("")
    jrows = {r["relation"]: r["generated"] for r in jf_rows("eigen", conv)}
    lines += [
        "## Sign of [J0, J-1]",
        "",
        f"Generated: [J0, J1] = {jrows['[J0, J1]']}, [J0, J-1] = {jrows['[J0, J-1]']}, "
        f"[J1, J-1] = {jrows['[J1, J-1]']}. The printed pair [J0, J1] = J1 and [J0, J-1] = J-1 "
        "together with [J1, J-1] = J0 violates the Jacobi identity "
        "(the other two cyclic terms sum to -2 J0 while [J0, [J1, J-1]] = [J0, J0] = 0), so no rescaling of J1 and J-1 "
        "reproduces all three. The generated signs are the ones used everywhere.",
        "",
    ]
    return "\n".join(lines)
