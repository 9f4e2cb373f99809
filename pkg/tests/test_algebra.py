import numpy as np
import pytest

from symframes.algebra import (
    StarAlgebra,
    block_decomposition,
    center,
    commutant,
    find_isomorphism,
    join,
    span_closure,
)
from symframes.errors import DimMismatch
from symframes.groups import charge_decomposition, charge_observable, shift_representation

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2)


def test_pauli_pair_generates_full_matrix_algebra():
    alg = span_closure([X, Z])
    assert alg.algebra_dim == 4
    assert alg.contains(Y)
    assert alg.is_factor


def test_commuting_pauli_words_give_abelian_algebra():
    alg = span_closure([np.kron(X, X), np.kron(Z, Z)])
    assert alg.algebra_dim == 4
    assert alg.contains(np.kron(Y, Y))
    assert alg.center.algebra_dim == 4
    assert alg.blocks.profile == (1, 1, 1, 1)


def test_local_algebra_has_multiplicity():
    alg = span_closure([np.kron(I2, X), np.kron(I2, Z)])
    bs = alg.blocks
    assert bs.profile == (2,)
    assert bs.blocks[0].multiplicity == 2


def test_commutant_of_diagonal_z_by_hand():
    """Operators commuting with Z (x) I are block diagonal in the first factor."""
    comm = span_closure([np.kron(Z, I2)]).commutant
    assert comm.algebra_dim == 8
    for m in (X, Y, Z):
        assert comm.contains(np.kron(np.diag([1, 0]), m))
        assert comm.contains(np.kron(np.diag([0, 1]), m))
    assert not comm.contains(np.kron(X, I2))


def test_commutant_of_full_algebra_is_scalars():
    comm = commutant(StarAlgebra.full(3))
    assert comm.algebra_dim == 1
    assert comm.contains(np.eye(3))


def test_center_of_block_algebra():
    alg = span_closure([np.kron(Z, I2)]).commutant
    cen = center(alg)
    assert cen.algebra_dim == 2
    assert cen.contains(np.kron(Z, I2))


def test_scalars_and_full():
    assert StarAlgebra.scalars(4).algebra_dim == 1
    full = StarAlgebra.full(2)
    assert full.algebra_dim == 4 and full.contains_identity


def test_closure_residuals_small():
    alg = span_closure([np.kron(X, X), np.kron(Z, I2)])
    adj, prod = alg.closure_residuals()
    assert adj < 1e-10 and prod < 1e-10


def test_corner_has_projector_as_unit():
    p = np.diag([1, 1, 0]).astype(complex)
    alg = StarAlgebra.corner(p)
    assert alg.algebra_dim == 4
    np.testing.assert_allclose(alg.unit, p, atol=1e-12)
    assert not alg.contains_identity
    assert alg.blocks.profile == (2,)


def test_non_unital_double_commutant_adds_complement():
    alg = StarAlgebra.corner(np.diag([1, 1, 0]).astype(complex))
    dc = alg.commutant.commutant
    assert dc.algebra_dim == alg.algebra_dim + 1
    assert dc.contains(np.eye(3))
    assert alg.double_commutant_holds()


def test_weak_algebra_of_z3():
    rep = shift_representation(3, 2)
    c = charge_observable(charge_decomposition(rep))
    a_w = span_closure([c]).commutant
    assert a_w.algebra_dim == 27
    assert a_w.center.algebra_dim == 3
    assert a_w.blocks.profile == (3, 3, 3)
    assert not a_w.is_factor
    assert a_w.double_commutant_holds()


def test_block_projectors_sum_to_unit():
    rep = shift_representation(3, 2)
    c = charge_observable(charge_decomposition(rep))
    a_w = span_closure([c]).commutant
    bs = block_decomposition(a_w)
    np.testing.assert_allclose(sum(b.projector for b in bs.blocks), np.eye(9), atol=1e-10)


def test_join_of_two_local_algebras():
    a = span_closure([np.kron(X, I2), np.kron(Z, I2)])
    b = span_closure([np.kron(I2, X), np.kron(I2, Z)])
    j = join(a, b)
    assert j.algebra_dim == 16
    assert j.contains(np.kron(Y, Y))


def test_join_dim_mismatch():
    with pytest.raises(DimMismatch):
        join(StarAlgebra.full(2), StarAlgebra.full(3))


def test_isomorphism_by_profile():
    a = span_closure([np.kron(I2, X), np.kron(I2, Z)])
    b = span_closure([np.kron(X, I2), np.kron(Z, I2)])
    rep = find_isomorphism(a, b)
    assert rep.isomorphic
    c = span_closure([np.kron(Z, I2)]).commutant
    assert not find_isomorphism(a, c).isomorphic


def test_report_is_plain_data():
    r = span_closure([X]).report()
    assert r == {"dim": 2, "algebra_dim": 2, "center_dim": 2,
                 "blocks": [{"dim": 1, "multiplicity": 1}, {"dim": 1, "multiplicity": 1}], "is_factor": False}


def test_residual_dim_mismatch():
    with pytest.raises(DimMismatch):
        StarAlgebra.full(2).residual(np.eye(3))


def test_seed_does_not_change_structure():
    rep = shift_representation(3, 2)
    c = charge_observable(charge_decomposition(rep))
    profiles = {span_closure([c], seed=s).commutant.blocks.profile for s in (0, 1, 2, 99)}
    assert profiles == {(3, 3, 3)}


def _kron_commutant_dim(mats):
    # dense oracle: kernel of the stacked commutation maps
    d = mats[0].shape[0]
    eye = np.eye(d)
    big = np.vstack([np.kron(m, eye) - np.kron(eye, m.T) for m in mats])
    s = np.linalg.svd(big, compute_uv=False)
    return d * d - int(np.sum(s > 1e-8))


def _block_algebra_generators(rng, sizes, mult):
    # random elements of  (+)_k M_{sizes[k]} (x) 1_{mult[k]}
    d = sum(n * m for n, m in zip(sizes, mult))
    u = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))[0]
    gens = []
    for _ in range(3):
        blocks = []
        for n, m in zip(sizes, mult):
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            blocks.append(np.kron(a + a.conj().T, np.eye(m)))
        g = np.zeros((d, d), dtype=complex)
        pos = 0
        for b in blocks:
            g[pos : pos + len(b), pos : pos + len(b)] = b
            pos += len(b)
        gens.append(u @ g @ u.conj().T)
    return gens


@pytest.mark.parametrize("sizes,mult", [([2, 1], [1, 2]), ([2, 2], [2, 1]), ([3], [2]), ([1, 1, 2], [1, 1, 2])])
def test_commutant_matches_dense_oracle(rng, sizes, mult):
    gens = _block_algebra_generators(rng, sizes, mult)
    alg = span_closure(gens)
    com = commutant(alg)
    assert com.algebra_dim == _kron_commutant_dim(list(alg.basis))
    # the commutant of  (+) M_n (x) 1_m  is  (+) 1_n (x) M_m
    assert com.algebra_dim == sum(m * m for m in mult)
    for b in com.basis:
        for a in alg.basis:
            np.testing.assert_allclose(a @ b, b @ a, atol=1e-12)


def test_many_generators_take_bicommutant_route():
    # eleven independent hermitian letters exceed the word-closure limit
    gens = [np.kron(p, q) for p in (I2, X, Y, Z) for q in (I2, X, Y, Z)][1:12]
    many = span_closure(gens)
    assert many.algebra_dim == 16
    assert many.same_span(StarAlgebra.full(4))
    adj, prod = many.closure_residuals()
    assert max(adj, prod) < 1e-12


def test_bicommutant_route_respects_support_without_identity(rng):
    p = np.diag([1.0, 1.0, 1.0, 0.0]).astype(complex)
    gens = []
    for _ in range(12):
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        g = np.zeros((4, 4), dtype=complex)
        g[:3, :3] = a + a.conj().T
        gens.append(g)
    alg = span_closure(gens, adjoin_identity=False)
    assert alg.algebra_dim == 9
    np.testing.assert_allclose(alg.unit, p, atol=1e-12)
    assert not alg.contains_identity


def test_batched_residuals_agree_with_single(rng):
    alg = span_closure([np.kron(X, I2), np.kron(Z, I2)])
    xs = rng.standard_normal((5, 4, 4)) + 1j * rng.standard_normal((5, 4, 4))
    batched = alg.residuals(xs)
    single = [alg.residual(x) for x in xs]
    np.testing.assert_allclose(batched, single, atol=1e-14)
