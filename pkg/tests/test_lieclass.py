import random
from fractions import Fraction

import pytest

from racahlie.comalg import TensorPolynomial, commutator_poly, structure_constants, tensor_basis
from racahlie.fock import SparseOperator
from racahlie.lieclass import (
    JF_NAMES,
    analyse,
    build_jf_basis,
    cartan_subalgebra,
    check_closure,
    classify,
    display_coordinates,
    killing_form,
    preset,
    root_decomposition,
    sigma0_odd_k,
)
from racahlie.linalg import determinant
from racahlie.radix import ONE, ZERO, RadicalNumber
from racahlie.tensor import DoubleTensorLabel as L


def P(label, c=1):
    return TensorPolynomial.single(label, c)


@pytest.fixture(scope="module")
def b2():
    basis = sigma0_odd_k()
    return basis, analyse(basis)


def test_closure_reports():
    assert check_closure(sigma0_odd_k()).closed
    j, _ = preset("j-triplet")
    assert check_closure(j).closed
    pair = [P(L(0, 3, 0, 1)), P(L(0, 3, 0, -1))]
    report = check_closure(pair)
    assert not report.closed
    assert set(report.residuals[(0, 1)].labels()) == {L(0, 1, 0, 0), L(0, 3, 0, 0)}


def test_cartan_of_b2_is_diagonal(b2):
    basis, (sc, rs, ctype) = b2
    assert rs.rank == 2
    assert [str(e) for e in rs.cartan.elements] == ["1 * W[0,1,0,0]", "1 * W[0,3,0,0]"]


def test_b2_classification(b2):
    basis, (sc, rs, ctype) = b2
    assert ctype.name == "B2"
    assert ctype.cartan_matrix in ([[2, -2], [-1, 2]], [[2, -1], [-2, 2]])
    assert len(rs.roots) == 8
    assert len(sc) == rs.rank + len(rs.roots)
    assert ctype.details["length_ratio"] == 2
    assert ctype.details["weyl_closed"]
    assert all(c == RadicalNumber(Fraction(1, 2)) for c in ctype.details["adjacent_cos2"])
    assert not ctype.numeric


def test_root_vectors_are_exact_eigenvectors(b2):
    basis, (sc, rs, ctype) = b2
    for rv in rs.roots:
        assert any(rv.weight)
        for h, w in zip(rs.cartan.elements, rv.weight):
            assert commutator_poly(h, rv.polynomial) == rv.polynomial * w


def test_root_set_symmetric_with_adjoint_partners(b2):
    basis, (sc, rs, ctype) = b2
    tb = tensor_basis()

    def op(poly):
        out = SparseOperator.zero(tb.space.dim)
        for lab, c in poly.items():
            out = out + tb.operator(lab).scale(c)
        return out

    by_weight = {rv.weight: rv for rv in rs.roots}
    for rv in rs.roots:
        partner = by_weight[tuple(-x for x in rv.weight)]
        adj = tb.expand(op(rv.polynomial).transpose())
        adj = TensorPolynomial(adj)
        lab = adj.labels()[0]
        ratio = adj[lab] / partner.polynomial[lab]
        assert adj == partner.polynomial * ratio


def test_killing_form(b2):
    basis, (sc, rs, ctype) = b2
    K = killing_form(sc)
    n = len(K)
    assert all(K[i][j] == K[j][i] for i in range(n) for j in range(n))
    assert determinant(K) != ZERO
    # positive on the diagonal Cartan elements: K(T(0,1;0,0), T(0,1;0,0)) = 3/2
    assert rs.killing_cartan == [[RadicalNumber(Fraction(3, 2)), ZERO], [ZERO, RadicalNumber(Fraction(3, 2))]]


def test_display_coordinates_are_the_b2_pattern(b2):
    basis, (sc, rs, ctype) = b2
    coords = {(str(x), str(y)) for x, y in display_coordinates(rs, ctype)}
    expected = {("1", "0"), ("-1", "0"), ("0", "1"), ("0", "-1"),
                ("1", "1"), ("1", "-1"), ("-1", "1"), ("-1", "-1")}
    assert coords == expected


def test_j_triplet_is_a1():
    basis, names = preset("j-triplet")
    sc, rs, ctype = analyse(basis, names=names)
    assert ctype.name == "A1"
    assert rs.rank == 1
    assert sorted(rv.weight[0] for rv in rs.roots) == [-ONE, ONE]


def test_abelian_pair_is_toral():
    basis = [P(L(0, 0, 0, 0)), P(L(0, 2, 0, 0))]
    sc = structure_constants(basis)
    cartan = cartan_subalgebra(sc)
    assert len(cartan.vectors) == 2
    rs = root_decomposition(sc, cartan)
    assert classify(rs).name == "toral"


def test_classification_invariant_under_mixing():
    rng = random.Random(17)
    basis = sigma0_odd_k()
    while True:
        m = [[RadicalNumber(rng.randint(-2, 2)) for _ in range(10)] for _ in range(10)]
        if determinant(m) != ZERO:
            break
    mixed = []
    for row in m:
        p = TensorPolynomial()
        for c, b in zip(row, basis):
            if c:
                p = p + b * c
        mixed.append(p)
    sc, rs, ctype = analyse(mixed)
    assert ctype.name == "B2"
    assert len(rs.roots) == 8


def test_jf_bases():
    eig = build_jf_basis(mixtures="eigen")
    printed = build_jf_basis(mixtures="printed")
    assert list(eig.elements) == JF_NAMES
    assert eig.mixtures["F2"] == (ONE, ZERO) and eig.mixtures["F3"] == (ZERO, ONE)
    assert printed.mixtures["F2"] == (RadicalNumber(Fraction(3, 5)), RadicalNumber(Fraction(2, 5)))
    for jf in (eig, printed):
        sc, rs, ctype = analyse(jf.ordered(), names=JF_NAMES)
        assert ctype.name == "B2"
    with pytest.raises(ValueError):
        build_jf_basis(mixtures="other")
