"""Cartan subalgebras, root decomposition and rank <= 2 classification.

Everything runs on exact structure constants. Eigenvalues of adjoint maps
are located numerically (mpmath), recognised as radical numbers with PSLQ,
and then *verified exactly* by computing the eigenspaces in RadicalNumber
arithmetic. When recognition fails (eigenvalues outside the representable
field, e.g. after a generic change of basis) the decomposition is redone
in high-precision floating point and every result is flagged ``numeric``;
integrality of the Cartan matrix is then certified by a rounding margin.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from dataclasses import dataclass, field

import mpmath

from .comalg import StructureConstants, TensorPolynomial, commutator_poly, structure_constants
from .linalg import Span, inverse, nullspace
from .radix import ONE, ZERO, RadicalNumber, sqrt_rational
from .tensor import DoubleTensorLabel, default_convention

__all__ = [
    "CartanError",
    "CartanType",
    "RootVector",
    "RootSystem",
    "build_jf_basis",
    "cartan_subalgebra",
    "check_closure",
    "classify",
    "killing_form",
    "preset",
    "root_decomposition",
]

DPS = 80
ROUND_MARGIN = mpmath.mpf(10) ** -30


class CartanError(ValueError):
    pass


# -- closure, Killing form ---------------------------------------------------

@dataclass
class ClosureReport:
    residuals: dict  # (i, j) -> TensorPolynomial outside the span

    @property
    def closed(self) -> bool:
        return not self.residuals


def check_closure(basis, conv=None) -> ClosureReport:
    basis = list(basis)
    span = Span(b.terms for b in basis)
    out = {}
    for i, j in itertools.combinations(range(len(basis)), 2):
        r = commutator_poly(basis[i], basis[j], conv)
        _, residual = span.reduce(r.terms)
        if residual:
            out[(i, j)] = TensorPolynomial(residual)
    return ClosureReport(out)


def killing_form(sc: StructureConstants) -> list[list[RadicalNumber]]:
    """``K(x, y) = tr(ad_x ad_y)`` on the basis."""
    n = len(sc)
    ads = [sc.ad(i) for i in range(n)]
    K = [[ZERO] * n for _ in range(n)]
    for x in range(n):
        for y in range(x, n):
            t = ZERO
            ax, ay = ads[x], ads[y]
            for a in range(n):
                for b in range(n):
                    if ax[a][b] and ay[b][a]:
                        t = t + ax[a][b] * ay[b][a]
            K[x][y] = K[y][x] = t
    return K


def _form(K, u, v) -> RadicalNumber:
    s = ZERO
    for i, ui in enumerate(u):
        if ui:
            for j, vj in enumerate(v):
                if vj and K[i][j]:
                    s = s + ui * K[i][j] * vj
    return s


def _is_zero_vec(v) -> bool:
    return not any(v)


# -- Cartan subalgebra -------------------------------------------------------

def _centralizer(sc: StructureConstants, elems) -> list[list[RadicalNumber]]:
    n = len(sc)
    rows = []
    for h in elems:
        ad = sc.ad(h)
        # [h, x] = ad_h x = 0
        rows.extend({j: ad[i][j] for j in range(n) if ad[i][j]} for i in range(n))
    basis = nullspace([r for r in rows if r], range(n))
    return [[v.get(i, ZERO) for i in range(n)] for v in basis]


def _is_abelian(sc, elems) -> bool:
    return all(_is_zero_vec(sc.bracket(a, b)) for a, b in itertools.combinations(elems, 2))


def _unit(n, i):
    return [ONE if j == i else ZERO for j in range(n)]


def _prefers_diagonal(p: TensorPolynomial) -> bool:
    return bool(p) and all(lab.pi == 0 and lab.q == 0 for lab in p.labels())


@dataclass
class Cartan:
    vectors: list  # coordinate vectors in the algebra's basis
    elements: list  # the same, as TensorPolynomial
    witness: str  # how toral-ness was certified


def cartan_subalgebra(sc: StructureConstants) -> Cartan:
    """Maximal toral subalgebra, preferring diagonal (pi = q = 0) elements."""
    n = len(sc)
    if n == 0:
        return Cartan([], [], "empty")
    units = [_unit(n, i) for i in range(n)]
    if _is_abelian(sc, units):
        return Cartan(units, list(sc.basis), "abelian")
    K = killing_form(sc)
    order = sorted(range(n), key=lambda i: (not _prefers_diagonal(sc.basis[i]), i))
    chosen: list = []
    for i in order:
        e = units[i]
        if all(_is_zero_vec(sc.bracket(e, h)) for h in chosen) and _form(K, e, e):
            chosen.append(e)
    if not chosen:
        raise CartanError("no basis element with nonzero Killing norm")
    while True:
        cent = _centralizer(sc, chosen)
        span = Span({i: v for i, v in enumerate(h) if v} for h in chosen)
        extra = [c for c in cent if not span.contains({i: v for i, v in enumerate(c) if v})]
        if not extra:
            break
        if _is_abelian(sc, cent):
            for c in extra:
                if span.add({i: v for i, v in enumerate(c) if v}):
                    chosen.append(c)
            break
        pick = next((c for c in extra if _form(K, c, c)), None)
        if pick is None:
            raise CartanError("centralizer is not abelian and has no semisimple direction")
        chosen.append(pick)
    gram = [[_form(K, a, b) for b in chosen] for a in chosen]
    if _det_nonzero(gram):
        witness = "killing"
    elif all(_exact_eigen(sc.ad(h)) is not None for h in chosen):
        witness = "diagonalizable"
    else:
        raise CartanError("could not certify that the candidate Cartan subalgebra is toral")
    return Cartan(chosen, [sc.element(h) for h in chosen], witness)


def _det_nonzero(m) -> bool:
    from .linalg import determinant

    return bool(determinant(m)) if m else False


# -- eigenvalues -------------------------------------------------------------

def _to_mp(m):
    return mpmath.matrix([[x.to_mpf() for x in row] for row in m])


def _candidate_radicands(m) -> list[int]:
    primes = set()
    for row in m:
        for x in row:
            for d in x.radicands():
                p = 2
                while d > 1:
                    while d % p == 0:
                        primes.add(p)
                        d //= p
                    p += 1
    primes = sorted(primes)[:5]
    return sorted({math.prod(c) for r in range(1, len(primes) + 1) for c in itertools.combinations(primes, r)})


def _recognise(x, radicands) -> RadicalNumber | None:
    """Find ``sum c_d sqrt(d)`` equal to the real number ``x`` (PSLQ)."""
    tol = mpmath.mpf(10) ** (-(DPS // 2))
    if abs(x) < tol:
        return ZERO
    for k in range(0, len(radicands) + 1):
        ds = [1] + radicands[:k]
        vec = [x] + [mpmath.sqrt(d) for d in ds]
        rel = mpmath.pslq(vec, tol=tol, maxcoeff=10**8, maxsteps=20000)
        if rel and rel[0]:
            return RadicalNumber.from_terms({d: Fraction(-c, rel[0]) for d, c in zip(ds, rel[1:]) if c})
    return None


def _exact_eigen(m) -> list[tuple[RadicalNumber, list]] | None:
    """Exact eigen-decomposition ``[(value, [eigenvectors...]), ...]`` or None.

    None means the eigenvalues could not be represented, or the matrix is
    not diagonalizable over the radical field.
    """
    n = len(m)
    with mpmath.workdps(DPS):
        vals = mpmath.eig(_to_mp(m), left=False, right=False)
        rads = _candidate_radicands(m)
        found: list[RadicalNumber] = []
        for v in vals:
            if abs(mpmath.im(v)) > mpmath.mpf(10) ** (-(DPS // 2)):
                return None
            r = _recognise(mpmath.re(v), rads)
            if r is None:
                return None
            if r not in found:
                found.append(r)
    out = []
    total = 0
    for lam in found:
        rows = []
        for i in range(n):
            row = {j: m[i][j] for j in range(n) if m[i][j]}
            d = row.get(i, ZERO) - lam
            if d:
                row[i] = d
            else:
                row.pop(i, None)
            if row:
                rows.append(row)
        vecs = nullspace(rows, range(n))
        if not vecs:
            return None
        total += len(vecs)
        out.append((lam, [[v.get(i, ZERO) for i in range(n)] for v in vecs]))
    return out if total == n else None


# -- roots -------------------------------------------------------------------

@dataclass
class RootVector:
    weight: tuple  # eigenvalues under the Cartan elements (RadicalNumber or mpc)
    vector: list | None  # coordinates in the algebra basis (exact mode)
    polynomial: TensorPolynomial | None
    numeric: bool = False


@dataclass
class RootSystem:
    cartan: Cartan
    roots: list
    killing_cartan: list  # Killing form on the Cartan elements
    numeric: bool = False

    @property
    def rank(self) -> int:
        return len(self.cartan.vectors)


def _matvec(m, v):
    n = len(m)
    out = []
    for i in range(n):
        s = ZERO
        for j in range(n):
            if m[i][j] and v[j]:
                s = s + m[i][j] * v[j]
        out.append(s)
    return out


def _weights(ads, v) -> tuple | None:
    p = next(i for i, x in enumerate(v) if x)
    inv = v[p].reciprocal()
    ws = []
    for ad in ads:
        w = _matvec(ad, v)
        lam = w[p] * inv
        if any(w[i] != lam * v[i] for i in range(len(v))):
            return None
        ws.append(lam)
    return tuple(ws)


def _generic_coefficients(r):
    yield tuple([1] * r)
    for t in itertools.product(range(1, 8), repeat=r):
        yield t


def root_decomposition(sc: StructureConstants, cartan: Cartan | None = None) -> RootSystem:
    cartan = cartan or cartan_subalgebra(sc)
    n, r = len(sc), len(cartan.vectors)
    K = killing_form(sc)
    Kh = [[_form(K, a, b) for b in cartan.vectors] for a in cartan.vectors]
    if r == 0 or r == n:
        return RootSystem(cartan, [], Kh)
    ads = [sc.ad(h) for h in cartan.vectors]
    for t in itertools.islice(_generic_coefficients(r), 30):
        h = [sum((c * x for c, x in zip(t, col)), ZERO) for col in zip(*cartan.vectors)]
        eig = _exact_eigen(sc.ad(h))
        if eig is None:
            break
        roots = []
        ok = True
        for lam, vecs in eig:
            if not lam:
                if len(vecs) != r:
                    ok = False
                continue
            if len(vecs) != 1:
                ok = False
                break
            ws = _weights(ads, vecs[0])
            if ws is None:
                ok = False
                break
            roots.append(RootVector(ws, vecs[0], sc.element(vecs[0])))
        if ok:
            return RootSystem(cartan, roots, Kh)
    return _numeric_roots(sc, cartan, Kh)


def _numeric_roots(sc, cartan, Kh) -> RootSystem:
    n, r = len(sc), len(cartan.vectors)
    with mpmath.workdps(DPS):
        ads = [_to_mp(sc.ad(h)) for h in cartan.vectors]
        gen = [mpmath.sqrt(p) for p in (2, 3, 5, 7, 11)[:r]]
        H = sum((g * a for g, a in zip(gen, ads)), mpmath.zeros(n, n))
        vals, vecs = mpmath.eig(H)
        roots = []
        for k, lam in enumerate(vals):
            if abs(lam) < mpmath.mpf(10) ** (-(DPS // 2)):
                continue
            v = vecs[:, k]
            p = max(range(n), key=lambda i: abs(v[i]))
            ws = tuple((a * v)[p] / v[p] for a in ads)
            roots.append(RootVector(ws, None, None, numeric=True))
    return RootSystem(cartan, roots, Kh, numeric=True)


# -- classification ----------------------------------------------------------

CARTAN_TYPES = {
    "A1": ([[2]], 2),
    "A1xA1": ([[2, 0], [0, 2]], 4),
    "A2": ([[2, -1], [-1, 2]], 6),
    "B2": ([[2, -2], [-1, 2]], 8),
    "G2": ([[2, -3], [-1, 2]], 12),
}


@dataclass
class CartanType:
    name: str
    cartan_matrix: list
    rank: int
    n_roots: int
    numeric: bool = False
    details: dict = field(default_factory=dict)

    def __str__(self):
        return self.name


class _Geometry:
    """Killing inner products of roots, exact or mpmath."""

    def __init__(self, rs: RootSystem):
        self.numeric = rs.numeric
        if rs.numeric:
            with mpmath.workdps(DPS):
                self.G = mpmath.inverse(_to_mp(rs.killing_cartan))
        else:
            self.G = inverse(rs.killing_cartan)

    def inner(self, a, b):
        r = len(a)
        if self.numeric:
            with mpmath.workdps(DPS):
                return mpmath.fsum(a[i] * self.G[i, j] * b[j] for i in range(r) for j in range(r))
        s = ZERO
        for i in range(r):
            for j in range(r):
                if a[i] and b[j] and self.G[i][j]:
                    s = s + a[i] * self.G[i][j] * b[j]
        return s

    def value(self, x):
        if self.numeric:
            return mpmath.re(x)
        return x.to_mpf()

    def integer(self, x) -> int:
        if self.numeric:
            k = int(mpmath.nint(mpmath.re(x)))
            if abs(x - k) > ROUND_MARGIN:
                raise CartanError(f"Cartan integer {x} is not integral within {ROUND_MARGIN}")
            return k
        if not x.is_rational() or x.as_fraction().denominator != 1:
            raise CartanError(f"Cartan integer {x} is not an integer")
        return int(x.as_fraction())

    def same(self, a, b) -> bool:
        if self.numeric:
            return all(abs(x - y) < ROUND_MARGIN for x, y in zip(a, b))
        return tuple(a) == tuple(b)


def _neg(w):
    return tuple(-x for x in w)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _positive_roots(geo, weights):
    # generic linear functional: Killing products with a few fixed roots
    ref = []
    for w in weights:
        if len(ref) == len(w):
            break
        ref.append(w)
    coeff = [mpmath.pi ** k for k in range(len(ref))]
    with mpmath.workdps(DPS):
        score = [mpmath.fsum(c * geo.value(geo.inner(w, f)) for c, f in zip(coeff, ref)) for w in weights]
    return [w for w, s in zip(weights, score) if s > 0]


def classify(rs: RootSystem) -> CartanType:
    """Name the root system by its Cartan matrix, root count and Weyl closure."""
    # numeric weights carry DPS digits; sums and reflections must keep them
    with mpmath.workdps(DPS):
        return _classify(rs)


def _classify(rs: RootSystem) -> CartanType:
    weights = [rv.weight for rv in rs.roots]
    numeric = rs.numeric
    if not weights:
        return CartanType("toral", [], rs.rank, 0, numeric, {"note": "no roots; abelian"})
    geo = _Geometry(rs)
    details: dict = {}
    for w in weights:
        if not any(geo.same(_neg(w), u) for u in weights):
            return CartanType("unclassified", [], rs.rank, len(weights), numeric, {"note": "root set not symmetric"})
    pos = _positive_roots(geo, weights)
    simple = [
        a for a in pos
        if not any(geo.same(_add(b, c), a) for b, c in itertools.combinations_with_replacement(pos, 2))
    ]
    # short simple roots last, to match the tabulated orientation
    simple.sort(key=lambda a: -geo.value(geo.inner(a, a)))
    A = [[geo.integer(2 * geo.inner(a, b) / geo.inner(b, b)) for b in simple] for a in simple]
    details["simple_roots"] = simple
    lengths = []
    for w in weights:
        L = geo.inner(w, w)
        if not any(geo.same((L,), (x,)) for x in lengths):
            lengths.append(L)
    lengths.sort(key=geo.value)
    details["squared_lengths"] = lengths
    if len(lengths) == 2:
        details["length_ratio"] = lengths[1] / lengths[0]
    # Weyl closure
    closed = True
    for a in weights:
        aa = geo.inner(a, a)
        for b in weights:
            f = 2 * geo.inner(b, a) / aa
            img = tuple(x - f * y for x, y in zip(b, a))
            if not any(geo.same(img, u) for u in weights):
                closed = False
    details["weyl_closed"] = closed
    name = "unclassified"
    if len(simple) == rs.rank and closed:
        for nm, (M, count) in CARTAN_TYPES.items():
            if count != len(weights) or len(M) != len(A):
                continue
            perms = itertools.permutations(range(len(A)))
            if any(all(A[p[i]][p[j]] == M[i][j] for i in range(len(A)) for j in range(len(A))) for p in perms):
                name = nm
                break
    if name == "B2":
        details["adjacent_cos2"] = _adjacent_cos2(geo, weights)
    return CartanType(name, A, rs.rank, len(weights), numeric, details)


def _adjacent_cos2(geo, weights):
    coords = plane_coordinates_float(geo, weights)
    order = sorted(range(len(weights)), key=lambda i: math.atan2(coords[i][1], coords[i][0]))
    out = []
    for i, j in zip(order, order[1:] + order[:1]):
        a, b = weights[i], weights[j]
        ab = geo.inner(a, b)
        out.append(ab * ab / (geo.inner(a, a) * geo.inner(b, b)))
    return out


def plane_coordinates_float(geo, weights):
    """Orthonormal 2-D coordinates (floats) of rank-2 roots."""
    base = [w for w in weights]
    a = base[0]
    b = next(w for w in base if abs(float(geo.value(geo.inner(w, a))) ** 2
                                    - float(geo.value(geo.inner(w, w))) * float(geo.value(geo.inner(a, a)))) > 1e-9)
    aa = float(geo.value(geo.inner(a, a)))
    ab = float(geo.value(geo.inner(a, b)))
    bb = float(geo.value(geo.inner(b, b)))
    perp2 = bb - ab * ab / aa
    out = []
    for w in weights:
        wa = float(geo.value(geo.inner(w, a)))
        wb = float(geo.value(geo.inner(w, b)))
        x = wa / math.sqrt(aa)
        y = (wb - wa * ab / aa) / math.sqrt(perp2)
        out.append((x, y))
    return out


def display_coordinates(rs: RootSystem, ctype: CartanType | None = None):
    """Root coordinates for plotting: short simple root along +x, unit length.

    Exact (RadicalNumber) where the frame is representable, else floats.
    """
    ctype = ctype or classify(rs)
    weights = [rv.weight for rv in rs.roots]
    if not weights:
        return []
    geo = _Geometry(rs)
    simple = ctype.details.get("simple_roots") or [weights[0]]
    short = min(simple, key=lambda a: geo.value(geo.inner(a, a)))
    ss = geo.inner(short, short)
    if rs.rank == 1:
        return [(geo.inner(w, short) / ss, ZERO) for w in weights]
    other = next((a for a in simple if a is not short), None)
    if other is None or rs.numeric:
        return plane_coordinates_float(geo, weights)
    # perpendicular direction p = other - proj(other on short), in units of |short|
    po = geo.inner(other, short) / ss
    pp = (geo.inner(other, other) - po * geo.inner(other, short)) / ss
    if not pp.is_rational():
        return plane_coordinates_float(geo, weights)
    norm = sqrt_rational(pp.as_fraction())
    out = []
    for w in weights:
        x = geo.inner(w, short) / ss
        y = (geo.inner(w, other) / ss - x * po) / norm
        out.append((x, y))
    return out


# -- J/F bases ---------------------------------------------------------------

B_SCALE = sqrt_rational(20)  # 2*sqrt(5), reciprocal of the J-triplet structure constant

JF_NAMES = ["J0", "J1", "J-1", "F0", "F1", "F-1", "F2", "F-2", "F3", "F-3"]


def _T(k, q):
    return TensorPolynomial.single(DoubleTensorLabel(0, k, 0, q))


@dataclass
class JFBasis:
    elements: dict  # name -> TensorPolynomial
    mixtures: dict  # name -> (coefficient of q=+-2 component, of q=+-3 component)
    source: str

    def ordered(self):
        return [self.elements[n] for n in JF_NAMES]


def sigma0_odd_k() -> list[TensorPolynomial]:
    return [_T(k, q) for k in (1, 3) for q in range(-k, k + 1)]


def _base_elements(b=B_SCALE):
    el = {}
    for q in (0, 1, -1):
        el[f"J{q}"] = _T(1, q) * b
        el[f"F{q}"] = _T(3, q) * b
    return el


def build_jf_basis(conv=None, mixtures: str = "eigen") -> JFBasis:
    """The J/F basis of the sigma=0, odd-k algebra.

    ``mixtures="printed"`` uses 3/5 and 2/5 weights of the ``q=+-2`` and
    ``q=+-3`` k=3 components; ``"eigen"`` takes the weights from the root
    vectors of the Cartan subalgebra spanned by J0 and F0.
    """
    conv = conv or default_convention()
    el = _base_elements()
    mix = {}
    if mixtures == "printed":
        big, small = Fraction(3, 5), Fraction(2, 5)
        for sgn in (1, -1):
            t2, t3 = _T(3, 2 * sgn), _T(3, 3 * sgn)
            el[f"F{2 * sgn}"] = (t2 * big + t3 * small) * B_SCALE
            el[f"F{3 * sgn}"] = (t2 * small + t3 * big) * B_SCALE
            mix[f"F{2 * sgn}"] = (RadicalNumber(big), RadicalNumber(small))
            mix[f"F{3 * sgn}"] = (RadicalNumber(small), RadicalNumber(big))
    elif mixtures == "eigen":
        algebra = sigma0_odd_k()
        sc = structure_constants(algebra, conv)
        cart_vecs = []
        for name in ("J0", "F0"):
            coords = Span(p.terms for p in algebra).coordinates(el[name].terms)
            cart_vecs.append([coords.get(i, ZERO) for i in range(len(algebra))])
        cartan = Cartan(cart_vecs, [el["J0"], el["F0"]], "given")
        rs = root_decomposition(sc, cartan)
        if rs.numeric:
            raise CartanError("root vectors of the J0/F0 Cartan subalgebra are not exact")
        for sgn in (1, -1):
            t2, t3 = DoubleTensorLabel(0, 3, 0, 2 * sgn), DoubleTensorLabel(0, 3, 0, 3 * sgn)
            found = []
            for rv in rs.roots:
                labs = set(rv.polynomial.labels())
                if labs and labs <= {t2, t3}:
                    c2, c3 = rv.polynomial[t2], rv.polynomial[t3]
                    total = c2 + c3
                    found.append((c2 / total, c3 / total))
            if len(found) != 2:
                raise CartanError(f"expected two root vectors in the q=+-2/+-3 block, found {len(found)}")
            # the one weighted towards |q|=2 is F(+-2)
            found.sort(key=lambda m: -(m[0] - m[1]).to_mpf())
            for name, (c2, c3) in zip((f"F{2 * sgn}", f"F{3 * sgn}"), found):
                el[name] = (_T(3, 2 * sgn) * c2 + _T(3, 3 * sgn) * c3) * B_SCALE
                mix[name] = (c2, c3)
    else:
        raise ValueError(f"unknown mixtures {mixtures!r}; use 'eigen' or 'printed'")
    return JFBasis({n: el[n] for n in JF_NAMES}, mix, mixtures)


def preset(name: str, conv=None) -> tuple[list[TensorPolynomial], list[str]]:
    """Named operator sets: ``sigma0-odd-k``, ``jf-printed``, ``jf-eigen``, ``j-triplet``."""
    if name == "sigma0-odd-k":
        basis = sigma0_odd_k()
        return basis, [str(p.labels()[0]) for p in basis]
    if name in ("jf-printed", "jf-eigen"):
        jf = build_jf_basis(conv, "printed" if name == "jf-printed" else "eigen")
        return jf.ordered(), list(JF_NAMES)
    if name == "j-triplet":
        el = _base_elements()
        return [el["J0"], el["J1"], el["J-1"]], ["J0", "J1", "J-1"]
    raise ValueError(f"unknown preset {name!r}")


def analyse(basis, conv=None, names=None):
    """Structure constants, Cartan subalgebra, roots and type of a closed set."""
    sc = structure_constants(basis, conv, names=names)
    cartan = cartan_subalgebra(sc)
    rs = root_decomposition(sc, cartan)
    return sc, rs, classify(rs)
