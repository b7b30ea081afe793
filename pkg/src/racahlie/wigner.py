"""Exact Clebsch-Gordan, 6-j and Racah W coefficients.

All angular momenta are handled as twice their value so that half-integers
stay exact. Results are :class:`~racahlie.radix.RadicalNumber` values; every
coefficient has the form ``r*sqrt(d)`` and is assembled as a rational
alternating sum times the exact square root of a rational prefactor.

Phase convention: Condon-Shortley (``<j1 j1 j2 J-j1 | J J> > 0``).
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .radix import ZERO, RadicalNumber, sqrt_rational

__all__ = ["HalfInt", "cg", "six_j", "racah_w", "triangle"]


_LITERAL = re.compile(r"[+-]?\d+(/\d+)?")


class HalfInt:
    """An angular-momentum quantum number stored as ``twice`` its value."""

    __slots__ = ("twice",)

    def __init__(self, twice: int):
        if not isinstance(twice, int):
            raise TypeError("HalfInt takes the integer 2j; use HalfInt.of() to convert")
        self.twice = twice

    @classmethod
    def of(cls, x) -> "HalfInt":
        """Convert ``x`` (HalfInt, int, Fraction, or text such as ``'-3/2'``)."""
        if isinstance(x, HalfInt):
            return x
        if isinstance(x, str):
            text = x.strip()
            if not _LITERAL.fullmatch(text):
                raise ValueError(f"quantum number {x!r} must be an integer or p/2 literal")
            x = Fraction(text)
        if isinstance(x, float):
            raise TypeError("floats are not accepted as quantum numbers")
        f = Fraction(x)
        t = 2 * f
        if t.denominator != 1:
            raise ValueError(f"{x} is not a multiple of 1/2")
        return cls(int(t))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __int__(self):
        if self.twice % 2:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def __neg__(self):
        return HalfInt(-self.twice)

    def __add__(self, other):
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __eq__(self, other):
        try:
            return self.twice == HalfInt.of(other).twice
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return self.twice < HalfInt.of(other).twice

    def __le__(self, other):
        return self.twice <= HalfInt.of(other).twice

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        return str(self.twice // 2) if self.twice % 2 == 0 else f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({self})"


def _twice(x) -> int:
    return HalfInt.of(x).twice


def _check_jm(tj: int, tm: int, what: str):
    if tj < 0:
        raise ValueError(f"{what}: angular momentum j={tj}/2 is negative")
    if abs(tm) > tj:
        raise ValueError(f"{what}: |m| > j for j={tj}/2, m={tm}/2")
    if (tj - tm) % 2:
        raise ValueError(f"{what}: j={tj}/2 and m={tm}/2 differ by a half-integer")


def triangle(ta: int, tb: int, tc: int) -> bool:
    """Triangle rule on twice-values, including integer perimeter."""
    return (
        ta >= 0 and tb >= 0 and tc >= 0
        and abs(ta - tb) <= tc <= ta + tb
        and (ta + tb + tc) % 2 == 0
    )


def _f(t: int) -> int:
    # factorial of a twice-value known to be even
    return factorial(t // 2)


def cg(j1, m1, j2, m2, J, M) -> RadicalNumber:
    """Clebsch-Gordan coefficient ``<j1 m1 j2 m2 | J M>``."""
    a = tuple(_twice(x) for x in (j1, m1, j2, m2, J, M))
    for (tj, tm), name in zip(((a[0], a[1]), (a[2], a[3]), (a[4], a[5])), ("j1,m1", "j2,m2", "J,M")):
        _check_jm(tj, tm, name)
    return _cg2(*a)


@lru_cache(maxsize=None)
def _cg2(tj1, tm1, tj2, tm2, tJ, tM) -> RadicalNumber:
    if tM != tm1 + tm2 or not triangle(tj1, tj2, tJ):
        return ZERO
    pre = Fraction(
        (tJ + 1) * _f(tJ + tj1 - tj2) * _f(tJ - tj1 + tj2) * _f(tj1 + tj2 - tJ),
        _f(tj1 + tj2 + tJ + 2),
    )
    pre *= (
        _f(tJ + tM) * _f(tJ - tM) * _f(tj1 - tm1) * _f(tj1 + tm1)
        * _f(tj2 - tm2) * _f(tj2 + tm2)
    )
    # sum over k of (-1)^k / [k! (j1+j2-J-k)! (j1-m1-k)! (j2+m2-k)! (J-j2+m1+k)! (J-j1-m2+k)!]
    kmin = max(0, (tj2 - tJ - tm1) // 2, (tj1 - tJ + tm2) // 2)
    kmax = min((tj1 + tj2 - tJ) // 2, (tj1 - tm1) // 2, (tj2 + tm2) // 2)
    s = Fraction(0)
    for k in range(kmin, kmax + 1):
        tk = 2 * k
        den = (
            factorial(k) * _f(tj1 + tj2 - tJ - tk) * _f(tj1 - tm1 - tk)
            * _f(tj2 + tm2 - tk) * _f(tJ - tj2 + tm1 + tk) * _f(tJ - tj1 - tm2 + tk)
        )
        s += Fraction(-1 if k % 2 else 1, den)
    return sqrt_rational(pre) * s


def _delta2(ta, tb, tc) -> Fraction:
    return Fraction(_f(ta + tb - tc) * _f(ta - tb + tc) * _f(-ta + tb + tc), _f(ta + tb + tc + 2))


def six_j(a, b, c, d, e, f) -> RadicalNumber:
    """Wigner 6-j symbol ``{a b c; d e f}`` (Racah single-sum formula)."""
    t = tuple(_twice(x) for x in (a, b, c, d, e, f))
    for x in t:
        if x < 0:
            raise ValueError(f"6-j argument {x}/2 is negative")
    return _sixj2(*t)


@lru_cache(maxsize=None)
def _sixj2(ta, tb, tc, td, te, tf) -> RadicalNumber:
    triads = ((ta, tb, tc), (ta, te, tf), (td, tb, tf), (td, te, tc))
    if not all(triangle(*tr) for tr in triads):
        return ZERO
    pre = Fraction(1)
    for tr in triads:
        pre *= _delta2(*tr)
    sums = [sum(tr) for tr in triads]
    tmin = max(sums) // 2
    tmax = min(ta + tb + td + te, ta + tc + td + tf, tb + tc + te + tf) // 2
    s = Fraction(0)
    for t in range(tmin, tmax + 1):
        tt = 2 * t
        den = (
            _f(tt - sums[0]) * _f(tt - sums[1]) * _f(tt - sums[2]) * _f(tt - sums[3])
            * _f(ta + tb + td + te - tt) * _f(ta + tc + td + tf - tt)
            * _f(tb + tc + te + tf - tt)
        )
        s += Fraction((-1 if t % 2 else 1) * factorial(t + 1), den)
    return sqrt_rational(pre) * s


def racah_w(a, b, c, d, e, f) -> RadicalNumber:
    """Racah coefficient ``W(abcd; ef) = (-1)^(a+b+c+d) {a b e; d c f}``."""
    t = tuple(_twice(x) for x in (a, b, c, d, e, f))
    val = six_j(*(HalfInt(x) for x in (t[0], t[1], t[4], t[3], t[2], t[5])))
    if not val:
        return val
    phase = (t[0] + t[1] + t[2] + t[3]) // 2
    return -val if phase % 2 else val
