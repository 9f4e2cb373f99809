import json

import numpy as np
import pytest

from symframes.errors import DimMismatch, DimOverflow, IncompleteDecomposition, IndexOutOfRange
from symframes.groups import (
    ChargeDecomposition,
    FiniteAbelianRep,
    Sector,
    charge_decomposition,
    charge_eigenstate,
    charge_observable,
    clock,
    cyclic_shift,
    exp_i,
    group_average,
    local_operator,
    matrix_from_json,
    matrix_to_json,
    shift_representation,
    trivial_representation,
)


def test_cyclic_shift_moves_basis_states():
    s = cyclic_shift(3)
    e0 = np.array([1, 0, 0])
    np.testing.assert_array_equal(s @ e0, [0, 1, 0])
    np.testing.assert_array_equal(np.linalg.matrix_power(s, 3), np.eye(3))


def test_shift_and_clock_commutation():
    n = 4
    w = np.exp(2j * np.pi / n)
    s, c = cyclic_shift(n), clock(n)
    np.testing.assert_allclose(c @ s, w * s @ c, atol=1e-12)


def test_shift_representation_is_tensor_power():
    rep = shift_representation(3, 2)
    np.testing.assert_array_equal(rep.generator, np.kron(cyclic_shift(3), cyclic_shift(3)))
    rep.validate()
    assert rep.dim == 9 and rep.order == 3


def test_shift_representation_dim_cap():
    with pytest.raises(DimOverflow):
        shift_representation(4, 5, dim_cap=256)


def test_validate_rejects_wrong_order():
    with pytest.raises(ValueError):
        FiniteAbelianRep(4, cyclic_shift(3)).validate()


def test_z3_charge_eigenstates_by_formula():
    """The explicit states |c; r> are eigenvectors with eigenvalue e^{2 i pi c / 3}."""
    rep = shift_representation(3, 2)
    dec = charge_decomposition(rep)
    for c in range(3):
        for r in range(3):
            psi = charge_eigenstate(3, c, r)
            np.testing.assert_allclose(rep.generator @ psi, np.exp(2j * np.pi * c / 3) * psi, atol=1e-12)
            np.testing.assert_allclose(dec.projector(c) @ psi, psi, atol=1e-12)


def test_charge_eigenstate_rejects_bad_labels():
    with pytest.raises(IndexOutOfRange):
        charge_eigenstate(3, 3, 0)
    with pytest.raises(ValueError):
        charge_eigenstate(4, 0, 0)


def test_decomposition_sorted_and_complete():
    dec = charge_decomposition(shift_representation(2, 3))
    assert dec.charges == [0, 1]
    assert dec.dims == [4, 4]
    np.testing.assert_allclose(sum(s.projector for s in dec.sectors), np.eye(8), atol=1e-12)


def test_zero_projector_is_group_average():
    rep = shift_representation(3, 2)
    np.testing.assert_allclose(charge_decomposition(rep).zero_projector, group_average(rep), atol=1e-12)


def test_charge_observable_exponentiates_to_generator():
    rep = shift_representation(3, 2)
    c = charge_observable(charge_decomposition(rep))
    np.testing.assert_allclose(exp_i(c), rep.generator, atol=1e-10)


def test_charge_observable_incomplete():
    p = np.diag([1.0, 0.0]).astype(complex)
    dec = ChargeDecomposition(2, (Sector(0, 1.0, p, 1),))
    with pytest.raises(IncompleteDecomposition):
        charge_observable(dec)


def test_trivial_representation_single_sector():
    dec = charge_decomposition(trivial_representation(3, 2))
    assert dec.charges == [0] and dec.dims == [2]
    np.testing.assert_allclose(dec.projector(1), 0)


def test_block_masks():
    dec = charge_decomposition(shift_representation(3, 2))
    assert dec.block_mask().sum() == 27
    m0 = dec.block_mask([0])
    assert m0.sum() == 9 and m0[:3, :3].all()


def test_local_operator():
    s = cyclic_shift(2)
    np.testing.assert_array_equal(local_operator(s, 1, [3, 2]), np.kron(np.eye(3), s))
    with pytest.raises(DimMismatch):
        local_operator(s, 0, [3, 2])


def test_json_round_trip():
    rep = shift_representation(3, 1)
    back = FiniteAbelianRep.from_json(rep.to_json())
    np.testing.assert_array_equal(back.generator, rep.generator)
    assert json.loads(rep.to_json())["order"] == 3


def test_matrix_json_accepts_nested_rows():
    m = np.array([[1 + 2j, 0], [0, -1j]])
    flat = matrix_to_json(m)
    nested = [flat[0:2], flat[2:4]]
    np.testing.assert_array_equal(matrix_from_json(nested), m)
    with pytest.raises(DimMismatch):
        matrix_from_json(flat[:3])
