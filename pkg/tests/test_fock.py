import numpy as np
import pytest

from oracles import dense_fock
from racahlie import kernels
from racahlie.fock import FockSpace, SparseOperator, anticommutator, commutator
from racahlie.radix import RadicalNumber, sqrt_rational


@pytest.fixture(scope="module")
def space():
    return FockSpace()


def to_dense(op: SparseOperator) -> np.ndarray:
    m = np.zeros((op.dim, op.dim))
    for (r, c), v in op.entries().items():
        m[r, c] = float(v)
    return m


def test_dimensions(space):
    assert space.n_orbitals == 10
    assert space.dim == 1024
    assert [len(space.sector(n)) for n in (0, 1, 2, 10)] == [1, 10, 45, 1]


def test_creation_matches_dense_oracle():
    small = FockSpace(s="1/2", l=1)  # 6 modes keeps the dense oracle cheap
    dense = dense_fock(small.n_orbitals)
    for i in range(small.n_orbitals):
        assert np.array_equal(to_dense(small.create(i)), dense[i])


def test_car_all_pairs(space):
    one = SparseOperator.identity(space.dim)
    zero = SparseOperator.zero(space.dim)
    for i in range(10):
        for j in range(10):
            assert anticommutator(space.annihilate(i), space.create(j)) == (one if i == j else zero)
            assert anticommutator(space.create(i), space.create(j)) == zero


def test_sparsity_counts(space):
    assert space.one_body(0, 1).nnz == 256
    assert space.one_body(2, 2).nnz == 512
    assert space.create(3).nnz == 512


def test_one_body_preserves_sectors(space):
    op = space.one_body(1, 7) + space.one_body(4, 4).scale(sqrt_rational(2))
    for (r, c) in op.entries():
        assert bin(r).count("1") == bin(c).count("1")


def test_number_operator_is_diagonal(space):
    n = space.number()
    for (r, c), v in n.entries().items():
        assert r == c and v == bin(r).count("1")


def test_dump_round_trip(space):
    op = space.one_body(1, 2).scale(sqrt_rational(5) / 10) - space.one_body(3, 3)
    assert SparseOperator.load(space.dim, op.dump()) == op


def test_arithmetic_is_exact(space):
    a = space.one_body(0, 5).scale(RadicalNumber.sqrt(3))
    b = space.one_body(5, 0).scale(RadicalNumber.sqrt(3))
    c = commutator(a, b)
    assert c == (space.one_body(0, 0) - space.one_body(5, 5)).scale(3)
    assert (a + b) - b == a


def test_backends_agree():
    if "compiled" not in kernels.available():
        pytest.skip("compiled extension not built")
    results = {}
    for name in ("compiled", "python"):
        with kernels.using(name):
            sp = FockSpace()
            x = sp.one_body(1, 2).scale(sqrt_rational(7)) + sp.one_body(2, 1)
            y = sp.one_body(2, 3).scale(RadicalNumber(5)) + sp.one_body(3, 1).scale(sqrt_rational(2))
            results[name] = (commutator(x, y), x @ y @ x)
    assert results["compiled"][0] == results["python"][0]
    assert results["compiled"][1] == results["python"][1]


def test_huge_coefficients_fall_back_exactly(space):
    big = RadicalNumber(2**70 + 1)
    x = space.one_body(0, 1).scale(big)
    y = space.one_body(1, 0).scale(big)
    z = x @ y
    assert z.get(1, 1) == big * big


def test_orderings(space):
    rev = FockSpace(ordering="reversed")
    assert rev.orbitals[0].key() == space.orbitals[-1].key()
    with pytest.raises(ValueError):
        FockSpace(ordering=[(1, 4)] * 10)
