"""Exact arithmetic in the ring of rational combinations of square roots.

A :class:`RadicalNumber` is a finite sum ``sum_d c_d * sqrt(d)`` with every
``d`` a squarefree positive integer and every ``c_d`` a nonzero rational.
Square roots of distinct squarefree integers are linearly independent over
Q, so the term map is a canonical form and equality is structural.

Rationals are plain :class:`fractions.Fraction` values.
"""
from __future__ import annotations

import math
import re
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

__all__ = [
    "Fraction",
    "RadicalNumber",
    "approx",
    "parse",
    "sqrt_rational",
    "squarefree_split",
]


@lru_cache(maxsize=65536)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(g, d)`` with ``n == g*g*d`` and ``d`` squarefree.

    Trial division; radicands in this package are products of small primes.
    """
    if n <= 0:
        raise ValueError(f"radicand must be positive, got {n}")
    g, d = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            g *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    return g, d * n


@lru_cache(maxsize=65536)
def _prime_factors(d: int) -> tuple[int, ...]:
    out = []
    p = 2
    while p * p <= d:
        if d % p == 0:
            out.append(p)
            d //= p
        p += 1 if p == 2 else 2
    if d > 1:
        out.append(d)
    return tuple(out)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


class RadicalNumber:
    """Immutable element of Q[sqrt(2), sqrt(3), sqrt(5), ...]."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, value=0):
        if isinstance(value, RadicalNumber):
            terms = value._terms
        else:
            q = _as_fraction(value)
            terms = {1: q} if q else {}
        self._terms = terms
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "RadicalNumber":
        # terms must already be canonical: squarefree keys, nonzero values
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def from_terms(cls, terms) -> "RadicalNumber":
        """Build ``sum c*sqrt(d)`` from ``{d: c}`` or ``[(d, c), ...]``.

        Radicands need not be squarefree; they are reduced here.
        """
        items = terms.items() if isinstance(terms, dict) else terms
        out: dict[int, Fraction] = {}
        for d, c in items:
            c = _as_fraction(c)
            if not c:
                continue
            g, sd = squarefree_split(int(d))
            out[sd] = out.get(sd, 0) + c * g
        return cls._raw({d: c for d, c in out.items() if c})

    @classmethod
    def sqrt(cls, d: int) -> "RadicalNumber":
        return sqrt_rational(Fraction(d))

    # -- inspection -----------------------------------------------------
    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 1 in self._terms)

    def is_single_term(self) -> bool:
        return len(self._terms) == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._terms.get(1, Fraction(0))

    def radicands(self) -> frozenset[int]:
        return frozenset(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, RadicalNumber):
            return self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self._terms == ({1: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self._terms.get(1, 0))
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, RadicalNumber):
            try:
                other = RadicalNumber(other)
            except TypeError:
                return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for d, c in other._terms.items():
            v = out.get(d)
            if v is None:
                out[d] = c
            else:
                v += c
                if v:
                    out[d] = v
                else:
                    del out[d]
        return RadicalNumber._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return RadicalNumber._raw({d: -c for d, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, RadicalNumber):
            try:
                other = RadicalNumber(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RadicalNumber):
            if isinstance(other, (int, Rational)):
                q = Fraction(other)
                if not q:
                    return ZERO
                return RadicalNumber._raw({d: c * q for d, c in self._terms.items()})
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return ZERO
        out: dict[int, Fraction] = {}
        for d1, c1 in a.items():
            for d2, c2 in b.items():
                if d1 == 1:
                    key, c = d2, c1 * c2
                elif d2 == 1:
                    key, c = d1, c1 * c2
                elif d1 == d2:
                    key, c = 1, c1 * c2 * d1
                else:
                    g = math.gcd(d1, d2)
                    key, c = (d1 // g) * (d2 // g), c1 * c2 * g
                v = out.get(key)
                out[key] = c if v is None else v + c
        return RadicalNumber._raw({d: c for d, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            if isinstance(n, int):
                return self.reciprocal() ** (-n)
            return NotImplemented
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- division -------------------------------------------------------
    def reciprocal(self) -> "RadicalNumber":
        """Multiplicative inverse.

        Single-term values use ``1/(r*sqrt(d)) = sqrt(d)/(r*d)``; general
        values are rationalised by multiplying through with conjugates
        ``a - b*sqrt(p)`` one prime at a time.
        """
        if not self._terms:
            raise ZeroDivisionError("reciprocal of zero")
        if len(self._terms) == 1:
            ((d, c),) = self._terms.items()
            return RadicalNumber._raw({d: 1 / (c * d)})
        num = ONE
        den = self
        while not den.is_rational():
            p = max(p for d in den._terms for p in _prime_factors(d))
            conj = RadicalNumber._raw(
                {d: (-c if d % p == 0 else c) for d, c in den._terms.items()}
            )
            num = num * conj
            den = den * conj
        return num * (1 / den.as_fraction())

    def __truediv__(self, other):
        if isinstance(other, RadicalNumber):
            if other.is_rational():
                return self * (1 / other.as_fraction())
            return self * other.reciprocal()
        if isinstance(other, (int, Rational)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        return NotImplemented

    def __rtruediv__(self, other):
        return RadicalNumber(other) * self.reciprocal()

    # -- numerics -------------------------------------------------------
    def __float__(self):
        return float(sum(float(c) * math.sqrt(d) for d, c in self._terms.items()))

    def approx(self) -> float:
        return float(self)

    def to_mpf(self):
        import mpmath

        return mpmath.fsum(
            mpmath.mpf(c.numerator) / c.denominator * mpmath.sqrt(d)
            for d, c in self._terms.items()
        )

    def sign(self) -> int:
        """Exact sign, decided by decimal evaluation at rising precision."""
        if not self._terms:
            return 0
        if len(self._terms) == 1:
            return 1 if next(iter(self._terms.values())) > 0 else -1
        prec = 40
        while True:
            with localcontext() as ctx:
                ctx.prec = prec
                total = Decimal(0)
                bound = Decimal(0)
                for d, c in self._terms.items():
                    t = Decimal(c.numerator) / Decimal(c.denominator) * Decimal(d).sqrt()
                    total += t
                    bound += abs(t)
                err = bound * Decimal(10) ** (-(prec - 5))
                if abs(total) > err:
                    return 1 if total > 0 else -1
            prec *= 2

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- text -----------------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, (d, c) in enumerate(sorted(self._terms.items())):
            mag = abs(c)
            q = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            if d == 1:
                body = q
            elif mag == 1:
                body = f"sqrt({d})"
            else:
                body = f"{q}*sqrt({d})"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"RadicalNumber('{self}')"


ZERO = RadicalNumber._raw({})
ONE = RadicalNumber._raw({1: Fraction(1)})


def sqrt_rational(r) -> RadicalNumber:
    """Exact ``sqrt(r)`` for a nonnegative rational: ``sqrt(p/q) = sqrt(p*q)/q``."""
    r = _as_fraction(r)
    if r < 0:
        raise ValueError(f"square root of negative rational {r}")
    if not r:
        return ZERO
    p, q = r.numerator, r.denominator
    g, d = squarefree_split(p * q)
    return RadicalNumber._raw({d: Fraction(g, q)})


def approx(x) -> float:
    return float(x)


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<num>\d+)(?:/(?P<den>\d+))?)?
        (?P<star>\s*\*\s*)?
        (?:sqrt\((?P<rad>\d+)\))?\s*""",
    re.VERBOSE,
)


def parse(text: str) -> RadicalNumber:
    """Inverse of ``str(RadicalNumber)``; also accepts ``p/q`` and integers."""
    s = text.strip()
    if not s:
        raise ValueError("empty radical expression")
    pos = 0
    terms: list[tuple[int, Fraction]] = []
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group("num") is None and m.group("rad") is None):
            raise ValueError(f"cannot parse radical expression {text!r} at {s[pos:]!r}")
        if pos and m.group("sign") is None:
            raise ValueError(f"missing operator in {text!r}")
        if m.group("star") and (m.group("num") is None or m.group("rad") is None):
            raise ValueError(f"dangling '*' in {text!r}")
        if m.group("num") is not None and m.group("rad") is not None and not m.group("star"):
            raise ValueError(f"missing '*' in {text!r}")
        c = Fraction(int(m.group("num")), int(m.group("den") or 1)) if m.group("num") else Fraction(1)
        if m.group("sign") == "-":
            c = -c
        terms.append((int(m.group("rad") or 1), c))
        pos = m.end()
    return RadicalNumber.from_terms(terms)
