import numpy as np
import pytest

from symframes.errors import DimMismatch, NotCentral
from symframes.groups import charge_decomposition, charge_observable, cyclic_shift, shift_representation
from symframes.linalg import random_operator
from symframes.perspectives import (
    approach_rows,
    central_shift,
    charge_accessible,
    collaborative_algebra,
    half_inverse,
    momentum_ambiguity,
    perspectival_algebra,
    perspective_report,
    system_perspective,
    yen,
    yen_is_symmetric,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2)


def test_yen_on_z2_paulis():
    rep = shift_representation(2, 1)
    np.testing.assert_array_equal(yen(rep, Z), np.kron(Z, Z))
    np.testing.assert_array_equal(yen(rep, X), np.kron(I2, X))


def test_yen_is_block_diagonal_by_hand(rng):
    rep = shift_representation(3, 1)
    t = random_operator(3, rng)
    out = yen(rep, t)
    s = cyclic_shift(3)
    for g in range(3):
        u = np.linalg.matrix_power(s, g)
        np.testing.assert_allclose(out[3 * g : 3 * g + 3, 3 * g : 3 * g + 3], u @ t @ u.conj().T)
    off = out.copy()
    for g in range(3):
        off[3 * g : 3 * g + 3, 3 * g : 3 * g + 3] = 0
    np.testing.assert_array_equal(off, 0)


def test_yen_image_symmetric(rng):
    rep = shift_representation(3, 1)
    assert yen_is_symmetric(rep, random_operator(3, rng))


def test_yen_dim_mismatch():
    with pytest.raises(DimMismatch):
        yen(shift_representation(2, 1), np.eye(3))


def test_perspectival_algebra_z2():
    alg = perspectival_algebra(shift_representation(2, 1))
    assert alg.algebra_dim == 4
    assert alg.blocks.profile == (2,)
    assert alg.blocks.blocks[0].multiplicity == 2


def test_system_perspective_frame_order():
    # system 1 as frame: yen(X) lands as X (x) I in natural order
    alg = system_perspective(2, 2, 1)
    assert alg.contains(np.kron(X, I2))
    assert alg.contains(np.kron(Z, Z))
    assert not alg.contains(np.kron(I2, X))
    with pytest.raises(IndexError):
        system_perspective(2, 2, 2)


def test_collaborative_z2_contains_xx_and_charge():
    rep = shift_representation(2, 2)
    collab = collaborative_algebra([system_perspective(2, 2, k) for k in range(2)])
    assert collab.algebra_dim == 8
    assert collab.contains(np.kron(X, X))
    assert charge_accessible(rep, collab)


def test_perspective_report():
    rep = shift_representation(2, 2)
    persp = {f"p{k}": system_perspective(2, 2, k) for k in range(2)}
    r = perspective_report(rep, persp)
    assert r.charge_in_collaborative
    assert r.charge_in_each_perspective == [False, False]
    assert set(r.to_dict()) == {"perspectives", "collaborative", "charge_in_collaborative", "charge_in_each_perspective"}


@pytest.mark.parametrize("n", [2, 3])
def test_table_rows_pattern(n):
    rows = approach_rows(n, 2)
    weak, strong = rows["weak"], rows["strong"]
    assert not weak.symmetric_algebra.is_factor and not weak.reversible and weak.charge_accessible
    assert strong.symmetric_algebra.is_factor and strong.reversible and not strong.charge_accessible


def test_table_rows_single_system():
    rows = approach_rows(2, 1)
    assert rows["weak"].perspectives["persp_0"].algebra_dim == 1


def test_central_shift_rejects_non_central():
    with pytest.raises(NotCentral):
        central_shift([X], Z, 0.5)


def test_central_shift_preserves_commutators():
    gens = [np.kron(X, I2), np.kron(Z, I2)]
    out = central_shift(gens, np.kron(I2, Z), 0.3)
    c0 = gens[0] @ gens[1] - gens[1] @ gens[0]
    c1 = out[0] @ out[1] - out[1] @ out[0]
    np.testing.assert_allclose(c0, c1, atol=1e-12)


def test_half_inverse():
    assert half_inverse(3) == 2
    assert half_inverse(5) == 3
    assert half_inverse(4) is None


@pytest.mark.parametrize("n", [3, 5])
def test_momentum_ambiguity(n):
    w = momentum_ambiguity(n)
    assert w.commutator_deviation < 1e-10
    assert w.charge_in_plain and not w.charge_in_shifted
    assert w.differs


def test_momentum_ambiguity_even_unavailable():
    with pytest.raises(ValueError):
        momentum_ambiguity(2)
