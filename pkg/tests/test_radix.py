from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from racahlie.radix import ONE, ZERO, RadicalNumber, parse, sqrt_rational, squarefree_split

radicands = st.sampled_from([1, 2, 3, 5, 6, 7, 10, 15, 30])
fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
radicals = st.dictionaries(radicands, fracs, max_size=3).map(RadicalNumber.from_terms)


def test_like_terms_and_inverse():
    half_root5 = RadicalNumber.from_terms({5: Fraction(1, 2)})
    assert half_root5 + half_root5 == RadicalNumber.sqrt(5)
    assert RadicalNumber.sqrt(2) + (-RadicalNumber.sqrt(2)) == ZERO
    assert not (RadicalNumber.sqrt(2) - RadicalNumber.sqrt(2)).terms
    two = RadicalNumber.from_terms({5: Fraction(1, 10), 2: Fraction(1, 3)})
    assert two.terms == {2: Fraction(1, 3), 5: Fraction(1, 10)}


def test_products_reduce_radicands():
    assert RadicalNumber.sqrt(5) * RadicalNumber.sqrt(5) == RadicalNumber(5)
    assert RadicalNumber.sqrt(2) * RadicalNumber.sqrt(10) == 2 * RadicalNumber.sqrt(5)
    # 1/(2 sqrt 5) times b = 2 sqrt 5 is exactly one
    assert sqrt_rational(Fraction(1, 20)) * sqrt_rational(20) == ONE


def test_sqrt_rational():
    x = sqrt_rational(Fraction(1, 20))
    assert x.terms == {5: Fraction(1, 10)}
    assert abs(float(x) - 0.22360679) < 1e-8
    assert sqrt_rational(Fraction(9, 4)) == RadicalNumber(Fraction(3, 2))
    assert sqrt_rational(0) == ZERO
    with pytest.raises(ValueError):
        sqrt_rational(Fraction(-1, 2))


@pytest.mark.parametrize("n,expected", [(1, (1, 1)), (12, (2, 3)), (72, (6, 2)), (49, (7, 1)), (30, (1, 30))])
def test_squarefree_split(n, expected):
    assert squarefree_split(n) == expected


def test_canonical_text():
    assert str(sqrt_rational(Fraction(1, 20))) == "1/10*sqrt(5)"
    assert str(RadicalNumber.sqrt(5)) == "sqrt(5)"
    assert str(RadicalNumber(Fraction(-1, 3))) == "-1/3"
    assert str(ZERO) == "0"
    assert str(RadicalNumber.from_terms({1: 1, 2: -Fraction(1, 2)})) == "1 - 1/2*sqrt(2)"


def test_parse_rejects_garbage():
    for bad in ["", "sqrt(", "2sqrt(3)", "1/2*", "1 2"]:
        with pytest.raises(ValueError):
            parse(bad)


@given(radicals, radicals, radicals)
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == ZERO
    assert x * ONE == x


@given(radicals)
def test_text_round_trip(x):
    assert parse(str(x)) == x


@settings(max_examples=60)
@given(radicals)
def test_reciprocal(x):
    if x:
        assert x * x.reciprocal() == ONE
        assert abs(float(x.reciprocal()) - 1 / float(x)) < 1e-9 * max(1.0, abs(1 / float(x)))


@given(radicals, radicals)
def test_order_matches_floats(x, y):
    fx, fy = float(x), float(y)
    if abs(fx - fy) > 1e-9:
        assert (x < y) == (fx < fy)
    assert (x == y) == (x - y == ZERO)


@given(st.fractions(min_value=0, max_value=50, max_denominator=30))
def test_sqrt_rational_squares_back(r):
    s = sqrt_rational(r)
    assert s * s == RadicalNumber(r)
    assert s.is_single_term() or s == ZERO
