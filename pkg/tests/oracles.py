"""Independent reference implementations used only by the tests.

None of these call the formulas under test:

* ``ladder_cg`` builds coupled states from the highest-weight condition
  ``J+ |J J> = 0`` and the lowering operator, the textbook construction.
* ``sixj_from_cg`` contracts four Clebsch-Gordan coefficients from
  ``ladder_cg``; it does not use the Racah single-sum formula.
* ``dense_fock`` builds Jordan-Wigner creation operators as float Kronecker
  products, independent of the bitmask construction in the package.
"""
from fractions import Fraction
from functools import lru_cache

import numpy as np

from racahlie.radix import ONE, ZERO, RadicalNumber, sqrt_rational


def _ms(tj):
    return range(tj, -tj - 1, -2)


def _raise(tj, tm):
    """``<m+1| j+ |m>`` for twice-values: sqrt((j-m)(j+m+1))."""
    return sqrt_rational(Fraction((tj - tm) * (tj + tm + 2), 4))


def _lower(tj, tm):
    """``<m-1| j- |m>``: sqrt((j+m)(j-m+1))."""
    return sqrt_rational(Fraction((tj + tm) * (tj - tm + 2), 4))


@lru_cache(maxsize=None)
def ladder_cg(tj1: int, tj2: int) -> dict:
    """``{(2m1, 2m2, 2J, 2M): <j1 m1 j2 m2|J M>}``, nonzero entries only."""
    out = {}
    for tJ in range(tj1 + tj2, abs(tj1 - tj2) - 1, -2):
        # highest weight: recursion from the J+ psi = 0 equations, m1 descending
        psi = {}
        tm1 = tj1
        tm2 = tJ - tm1
        psi[(tm1, tm2)] = ONE
        while True:
            nm1, nm2 = tm1 - 2, tm2 + 2
            if nm1 < -tj1 or nm2 > tj2:
                break
            # J+ component at (tm1, nm2): psi(nm1,nm2)*a + psi(tm1,tm2)*b = 0
            a = _raise(tj1, nm1)
            b = _raise(tj2, tm2)
            psi[(nm1, nm2)] = -psi[(tm1, tm2)] * b / a
            tm1, tm2 = nm1, nm2
        norm2 = sum((v * v for v in psi.values()), ZERO)
        assert norm2.is_rational(), "highest-weight norm must be rational"
        scale = sqrt_rational(norm2.as_fraction()).reciprocal()  # top component stays positive
        state = {k: v * scale for k, v in psi.items()}
        tM = tJ
        while True:
            for (m1, m2), v in state.items():
                if v:
                    out[(m1, m2, tJ, tM)] = v
            if tM == -tJ:
                break
            nxt: dict = {}
            for (m1, m2), v in state.items():
                if m1 > -tj1:
                    k = (m1 - 2, m2)
                    nxt[k] = nxt.get(k, ZERO) + v * _lower(tj1, m1)
                if m2 > -tj2:
                    k = (m1, m2 - 2)
                    nxt[k] = nxt.get(k, ZERO) + v * _lower(tj2, m2)
            f = _lower(tJ, tM).reciprocal()
            state = {k: v * f for k, v in nxt.items() if v}
            tM -= 2
    return out


def ladder_value(tj1, tm1, tj2, tm2, tJ, tM) -> RadicalNumber:
    return ladder_cg(tj1, tj2).get((tm1, tm2, tJ, tM), ZERO)


def _tri(a, b, c):
    return abs(a - b) <= c <= a + b and (a + b + c) % 2 == 0


def sixj_from_cg(ta, tb, tc, td, te, tf) -> RadicalNumber:
    """``{a b c; d e f}`` with j1=a, j2=b, j12=c, j3=d, J=e, j23=f.

    sum <j1 m1 j2 m2|j12 m12><j12 m12 j3 m3|J M><j2 m2 j3 m3|j23 m23><j1 m1 j23 m23|J M>
      = (-1)^(j1+j2+j3+J) sqrt((2j12+1)(2j23+1)) {j1 j2 j12; j3 J j23}
    evaluated at M = J.
    """
    j1, j2, j12, j3, J, j23 = ta, tb, tc, td, te, tf
    if not (_tri(j1, j2, j12) and _tri(j12, j3, J) and _tri(j2, j3, j23) and _tri(j1, j23, J)):
        return ZERO
    M = J
    s = ZERO
    for m1 in _ms(j1):
        for m2 in _ms(j2):
            m3 = M - m1 - m2
            if abs(m3) > j3 or (j3 - m3) % 2:
                continue
            c1 = ladder_value(j1, m1, j2, m2, j12, m1 + m2)
            c2 = ladder_value(j12, m1 + m2, j3, m3, J, M)
            c3 = ladder_value(j2, m2, j3, m3, j23, m2 + m3)
            c4 = ladder_value(j1, m1, j23, m2 + m3, J, M)
            if c1 and c2 and c3 and c4:
                s = s + c1 * c2 * c3 * c4
    phase = -1 if ((j1 + j2 + j3 + J) // 2) % 2 else 1
    return s * phase * sqrt_rational(Fraction(1, (j12 + 1) * (j23 + 1)))


def dense_fock(n: int):
    """Float creation operators ``c_i^+`` on n modes, Jordan-Wigner ordered.

    Basis index bit i is the occupation of mode i, matching the package's
    bitmask states, with the sign string on the lower-indexed modes.
    """
    I2 = np.eye(2)
    Z = np.diag([1.0, -1.0])
    up = np.array([[0.0, 0.0], [1.0, 0.0]])  # |0> -> |1>
    ops = []
    for i in range(n):
        # kron order: highest mode first, so bit i of the index is mode i
        factors = [I2] * (n - 1 - i) + [up] + [Z] * i
        m = np.array([[1.0]])
        for f in factors:
            m = np.kron(m, f)
        ops.append(m)
    return ops
