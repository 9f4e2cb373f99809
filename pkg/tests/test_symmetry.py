import numpy as np
import pytest

from symframes.errors import DimMismatch
from symframes.groups import charge_decomposition, charge_observable, shift_representation
from symframes.linalg import random_density_matrix
from symframes.symmetry import (
    SymmetryKind,
    is_symmetric,
    renormalize,
    strong_twirl,
    strong_twirl_double_sum,
    symmetry_residual,
    weak_twirl,
)


@pytest.fixture
def rep():
    return shift_representation(3, 2)


def test_weak_twirl_commutes_with_charge(rep, rng):
    rho = random_density_matrix(9, rng)
    out = weak_twirl(rep, rho)
    c = charge_observable(charge_decomposition(rep))
    np.testing.assert_allclose(c @ out, out @ c, atol=1e-10)
    assert is_symmetric(rep, out, SymmetryKind.WEAK)


def test_weak_twirl_is_block_diagonal(rep, rng):
    dec = charge_decomposition(rep)
    out = dec.in_eigenbasis(weak_twirl(rep, random_density_matrix(9, rng)))
    np.testing.assert_allclose(out[~dec.block_mask()], 0, atol=1e-10)


def test_strong_twirl_matches_double_sum(rep, rng):
    rho = random_density_matrix(9, rng)
    np.testing.assert_allclose(strong_twirl(rep, rho), strong_twirl_double_sum(rep, rho), atol=1e-12)


def test_strong_twirl_output_in_zero_sector(rep, rng):
    out = strong_twirl(rep, random_density_matrix(9, rng))
    assert is_symmetric(rep, out, SymmetryKind.STRONG)
    assert is_symmetric(rep, out, "weak")


def test_strong_not_weak_example(rep):
    # a charge-1 projector is weakly but not strongly symmetric
    p1 = charge_decomposition(rep).projector(1)
    assert is_symmetric(rep, p1, SymmetryKind.WEAK)
    assert not is_symmetric(rep, p1, SymmetryKind.STRONG)
    assert symmetry_residual(rep, p1, SymmetryKind.STRONG) > 1


def test_renormalize(rep):
    p1 = charge_decomposition(rep).projector(1) / 3
    assert renormalize(strong_twirl(rep, p1)) is None
    rho = charge_decomposition(rep).zero_projector
    np.testing.assert_allclose(np.trace(renormalize(rho)), 1)


def test_dim_mismatch(rep):
    with pytest.raises(DimMismatch):
        weak_twirl(rep, np.eye(4))
