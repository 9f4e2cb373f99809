import numpy as np
import pytest

from symframes.errors import NotNormal
from symframes.linalg import (
    Tolerance,
    eigendecompose_normal,
    hermitian_orthonormal_basis,
    hs_inner,
    intersect_hermitian_spans,
    is_projector,
    is_unitary,
    null_space,
    permute_subsystems,
    random_density_matrix,
    random_unitary,
    rank,
    stacked_null_space,
    tensor,
    tensor_all,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2)


def test_tolerance_rejects_nonpositive_and_subepsilon():
    with pytest.raises(ValueError):
        Tolerance(eq_tol=0.0)
    with pytest.raises(ValueError):
        Tolerance(rank_tol=-1.0)
    with pytest.raises(ValueError):
        Tolerance(eq_tol=1e-20)


def test_tensor_matches_block_formula():
    a = np.arange(4).reshape(2, 2).astype(complex)
    b = np.array([[1, 2j], [3, 4]])
    t = tensor(a, b)
    for i in range(2):
        for j in range(2):
            np.testing.assert_array_equal(t[2 * i : 2 * i + 2, 2 * j : 2 * j + 2], a[i, j] * b)


def test_tensor_xx_is_antidiagonal():
    np.testing.assert_array_equal(tensor(X, X), np.fliplr(np.eye(4)))


def test_tensor_all_associative(rng):
    a, b, c = (rng.standard_normal((2, 2)) for _ in range(3))
    np.testing.assert_allclose(tensor_all([a, b, c]), tensor(a, tensor(b, c)))


def test_permute_subsystems_swaps_factors(rng):
    a = rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3))
    np.testing.assert_allclose(permute_subsystems(np.kron(a, b), [2, 3], [1, 0]), np.kron(b, a))


def test_permute_three_factors(rng):
    ms = [rng.standard_normal((d, d)) for d in (2, 3, 2)]
    out = permute_subsystems(tensor_all(ms), [2, 3, 2], [2, 0, 1])
    np.testing.assert_allclose(out, tensor_all([ms[2], ms[0], ms[1]]))


def test_eigendecompose_reassembles(rng):
    u = random_unitary(5, rng)
    parts = eigendecompose_normal(u)
    np.testing.assert_allclose(sum(lam * p for lam, p in parts), u, atol=1e-12)
    for _, p in parts:
        assert is_projector(p)


def test_eigendecompose_xx_by_hand():
    parts = eigendecompose_normal(np.kron(X, X))
    # eigenvalue +1 first (argument 0), then -1 (argument pi)
    assert [round(lam.real) for lam, _ in parts] == [1, -1]
    plus = 0.5 * (np.eye(4) + np.kron(X, X))
    np.testing.assert_allclose(parts[0][1], plus, atol=1e-12)


def test_eigendecompose_merges_degenerate():
    parts = eigendecompose_normal(np.diag([1.0, 1.0 + 1e-12, 2.0]))
    assert len(parts) == 2
    assert round(np.trace(parts[0][1]).real) == 2


def test_eigendecompose_rejects_non_normal():
    with pytest.raises(NotNormal):
        eigendecompose_normal(np.array([[0, 1], [0, 0]], dtype=complex))


def test_rank_and_null_space():
    m = np.array([[1, 2], [2, 4]], dtype=complex)
    assert rank(m) == 1
    ns = null_space(m)
    assert ns.shape[1] == 1
    np.testing.assert_allclose(m @ ns, 0, atol=1e-12)


def test_stacked_null_space_equals_direct(rng):
    blocks = [rng.standard_normal((3, 6)) for _ in range(4)]
    direct = null_space(np.vstack(blocks))
    folded = stacked_null_space(iter(blocks), 6)
    assert direct.shape == folded.shape
    # same subspace: projectors agree
    np.testing.assert_allclose(direct @ direct.conj().T, folded @ folded.conj().T, atol=1e-10)


def test_hermitian_basis_is_hs_orthonormal():
    b = hermitian_orthonormal_basis([X, Z, X + Z, 1j * (X @ Z)], 2)
    assert len(b) == 3
    gram = np.array([[hs_inner(p, q) for q in b] for p in b])
    np.testing.assert_allclose(gram, np.eye(3), atol=1e-12)


def test_intersect_spans():
    a = hermitian_orthonormal_basis([I2, Z], 2)
    b = hermitian_orthonormal_basis([Z, X], 2)
    inter = intersect_hermitian_spans(a, b)
    assert len(inter) == 1
    np.testing.assert_allclose(abs(hs_inner(inter[0], Z / np.sqrt(2))), 1, atol=1e-12)


def test_random_generators_valid(rng):
    assert is_unitary(random_unitary(4, rng))
    rho = random_density_matrix(4, rng)
    assert abs(np.trace(rho) - 1) < 1e-12
    assert np.linalg.eigvalsh(rho).min() > -1e-12
