import random

import pytest

from racahlie.comalg import TensorPolynomial, commutator_closed_form, tensor_basis
from racahlie.fock import SparseOperator, commutator
from racahlie.radix import ZERO, RadicalNumber
from racahlie.tensor import (
    DoubleTensorLabel,
    TensorConvention,
    build_double_tensor,
    default_convention,
    labels_for,
    one_body_coefficients,
)


@pytest.fixture(scope="module")
def basis():
    return tensor_basis()


def op_of(poly: TensorPolynomial, basis) -> SparseOperator:
    out = SparseOperator.zero(basis.space.dim)
    for lab, c in poly.items():
        out = out + basis.operator(lab).scale(c)
    return out


def test_label_set():
    labels = labels_for()
    assert len(labels) == 100
    assert len(set(labels)) == 100
    assert DoubleTensorLabel.parse("0,1,0,-1") == DoubleTensorLabel(0, 1, 0, -1)
    with pytest.raises(ValueError):
        DoubleTensorLabel(0, 1, 0, 2).validate()
    with pytest.raises(ValueError):
        DoubleTensorLabel(2, 1, 0, 0).validate()


def test_frozen_convention():
    assert default_convention() == TensorConvention(True, -1)
    assert str(default_convention()) == "tilde(-)"


def test_span_rank(basis):
    assert basis.rank == 100


def test_scalar_is_number_operator(basis):
    t = basis.operator(DoubleTensorLabel(0, 0, 0, 0))
    n = basis.space.number()
    c = t.get(1, 1)
    assert c
    assert t == n.scale(c)


def test_adjoint_relation(basis):
    """T(sigma,k,pi,q)^T = eps(sigma,k) (-1)^(pi+q) T(sigma,k,-pi,-q), one eps per (sigma,k)."""
    for sigma in range(2):
        for k in range(5):
            eps = set()
            for pi in range(-sigma, sigma + 1):
                for q in range(-k, k + 1):
                    a = basis.operator(DoubleTensorLabel(sigma, k, pi, q)).transpose()
                    b = basis.operator(DoubleTensorLabel(sigma, k, -pi, -q))
                    phase = -1 if (pi + q) % 2 else 1
                    if a == b.scale(phase):
                        eps.add(1)
                    elif a == b.scale(-phase):
                        eps.add(-1)
                    else:
                        eps.add(None)
            assert len(eps) == 1 and None not in eps, (sigma, k, eps)


def test_orbital_rank_one_is_angular_momentum(basis):
    """One-particle matrix of T(0,1,0,0) is proportional to diag(ml)."""
    t = basis.one_particle_matrix(basis.operator(DoubleTensorLabel(0, 1, 0, 0)))
    ratios = set()
    for o in basis.space.orbitals:
        v = t.get((o.index, o.index), ZERO)
        if o.ml.twice:
            ratios.add(v / RadicalNumber(o.ml.twice))
        else:
            assert v == ZERO
    assert len(ratios) == 1
    assert all(i == j for i, j in t)


def test_two_particle_sector_agrees(basis):
    sector = basis.space.sector(2)
    assert len(sector) == 45
    rng = random.Random(7)
    labels = labels_for()
    for _ in range(25):
        a, b = rng.choice(labels), rng.choice(labels)
        A, B = basis.operator(a), basis.operator(b)
        full = commutator(A, B).restrict(sector)
        small = commutator(A.restrict(sector), B.restrict(sector))
        closed = op_of(commutator_closed_form(a, b), basis).restrict(sector)
        assert full == small == closed


def test_linearity(basis):
    a, b = DoubleTensorLabel(1, 2, 0, 1), DoubleTensorLabel(0, 3, 0, -2)
    x, y = RadicalNumber.sqrt(3), RadicalNumber(-2)
    combo = basis.operator(a).scale(x) + basis.operator(b).scale(y)
    assert basis.expand(combo) == {a: x, b: y}


def test_plain_convention_differs():
    lab = DoubleTensorLabel(0, 1, 0, 1)
    plain = one_body_coefficients(lab, TensorConvention(False))
    tilde = one_body_coefficients(lab, TensorConvention(True, -1))
    assert plain != tilde
    # the two tilde signs differ by one overall sign for s = 1/2
    plus = one_body_coefficients(lab, TensorConvention(True, 1))
    assert plus == {k: -v for k, v in tilde.items()}


def test_cached_build_is_shared():
    lab = DoubleTensorLabel(1, 3, -1, 2)
    assert build_double_tensor(lab) is build_double_tensor(lab)
