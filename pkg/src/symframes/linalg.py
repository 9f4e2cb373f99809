"""Dense complex linear algebra with explicit tolerances.

Matrices are plain ``numpy`` complex arrays; the helpers here decide the
numerical questions (hermiticity, rank, eigenvalue clustering) that the rest
of the package treats as exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import DimMismatch, NotNormal

ComplexMatrix = np.ndarray

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds.

    ``eq_tol`` bounds entrywise/Frobenius residuals when comparing operators,
    ``rank_tol`` bounds singular values and eigenvalue gaps treated as zero.
    """

    eq_tol: float = 1e-10
    rank_tol: float = 1e-9

    def __post_init__(self):
        if not (self.eq_tol > 0 and self.rank_tol > 0):
            raise ValueError("tolerances must be strictly positive")
        if self.eq_tol < _EPS:
            raise ValueError(f"eq_tol must be at least machine epsilon ({_EPS:.2e})")


DEFAULT_TOL = Tolerance()


def as_matrix(m) -> ComplexMatrix:
    """Return ``m`` as a square complex128 array, raising on bad shapes."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimMismatch(f"expected a nonempty square matrix, got shape {a.shape}")
    return a


def dagger(m: ComplexMatrix) -> ComplexMatrix:
    return np.conj(np.swapaxes(m, -1, -2))


def commutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    return a @ b - b @ a


def check_same_dim(*mats: ComplexMatrix) -> int:
    dims = {m.shape[-1] for m in mats}
    if len(dims) != 1:
        raise DimMismatch(f"operators act on different dimensions: {sorted(dims)}")
    return dims.pop()


def tensor(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product; the left factor indexes the outer blocks."""
    return np.kron(as_matrix(a), as_matrix(b))


def tensor_all(factors: Iterable[ComplexMatrix]) -> ComplexMatrix:
    return reduce(tensor, factors)


def tensor_power(m: ComplexMatrix, k: int) -> ComplexMatrix:
    if k < 1:
        raise ValueError("tensor power needs k >= 1")
    return tensor_all([m] * k)


def kron_vectors(*vecs: np.ndarray) -> np.ndarray:
    return reduce(np.kron, [np.asarray(v, dtype=np.complex128) for v in vecs])


def permute_subsystems(m: ComplexMatrix, dims: Sequence[int], perm: Sequence[int]) -> ComplexMatrix:
    """Reorder tensor factors of an operator.

    ``m`` acts on ``dims[0] x dims[1] x ...``; the result acts on the factors
    taken in the order ``perm`` (output factor ``i`` is input factor ``perm[i]``).
    """
    dims = list(dims)
    n = len(dims)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of {n} factors")
    d = int(np.prod(dims))
    if m.shape != (d, d):
        raise DimMismatch(f"operator of shape {m.shape} does not act on dims {dims}")
    t = m.reshape(dims + dims)
    axes = list(perm) + [n + p for p in perm]
    return t.transpose(axes).reshape(d, d)


def hs_inner(a: ComplexMatrix, b: ComplexMatrix) -> complex:
    """Hilbert-Schmidt inner product ``trace(a^dagger b)``."""
    if a.shape != b.shape:
        raise DimMismatch(f"shapes {a.shape} and {b.shape} differ")
    return complex(np.vdot(a.ravel(), b.ravel()))


def hs_norm(a: ComplexMatrix) -> float:
    return float(np.linalg.norm(a))


def max_abs(a: ComplexMatrix) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def allclose(a: ComplexMatrix, b: ComplexMatrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    return a.shape == b.shape and max_abs(a - b) < tol.eq_tol


def is_hermitian(m: ComplexMatrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    return max_abs(m - dagger(m)) < tol.eq_tol


def is_unitary(m: ComplexMatrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    eye = np.eye(m.shape[0])
    # Checking both products makes the predicate stable under adjoint.
    return max_abs(dagger(m) @ m - eye) < tol.eq_tol and max_abs(m @ dagger(m) - eye) < tol.eq_tol


def is_projector(m: ComplexMatrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    return is_hermitian(m, tol) and max_abs(m @ m - m) < tol.eq_tol


def is_normal(m: ComplexMatrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    return max_abs(commutator(m, dagger(m))) < tol.eq_tol


def _spectral_key(z: complex, angle_res: float = 1e-7) -> tuple[float, float]:
    arg = float(np.angle(z)) % (2 * np.pi)
    if abs(z) < angle_res or 2 * np.pi - arg < angle_res:
        arg = 0.0
    return (round(arg / angle_res), abs(z))


def eigendecompose_normal(
    m: ComplexMatrix, tol: Tolerance = DEFAULT_TOL
) -> list[tuple[complex, ComplexMatrix]]:
    """Spectral decomposition of a normal matrix into eigenprojectors.

    Eigenvalues closer than ``tol.rank_tol`` are merged into one sector (single
    linkage). The result is ordered by complex argument in ``[0, 2pi)`` and then
    by modulus, so sector order is reproducible.

    Raises:
        NotNormal: if ``[m, m^dagger]`` is not zero within ``tol.eq_tol``.
    """
    m = as_matrix(m)
    if not is_normal(m, tol):
        raise NotNormal(f"matrix is not normal: ||[m, m+]|| = {max_abs(commutator(m, dagger(m))):.3e}")
    t, q = scipy.linalg.schur(m, output="complex")
    evals = np.diag(t)

    # single-linkage clustering of nearby eigenvalues
    n = len(evals)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(evals[i] - evals[j]) < tol.rank_tol:
                parent[find(i)] = find(j)
    clusters: dict[int, list[int]] = {}
    for i in range(n):
        clusters.setdefault(find(i), []).append(i)

    out = []
    for idx in clusters.values():
        lam = complex(np.mean(evals[idx]))
        v = q[:, idx]
        p = v @ dagger(v)
        out.append((lam, 0.5 * (p + dagger(p))))
    out.sort(key=lambda pair: _spectral_key(pair[0]))
    return out


def rank(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> int:
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol.rank_tol))


def range_projector(mats: Sequence[ComplexMatrix], tol: Tolerance = DEFAULT_TOL) -> ComplexMatrix:
    """Orthogonal projector onto the sum of the column spaces of ``mats``."""
    stacked = np.concatenate([np.asarray(m) for m in mats], axis=1)
    u, s, _ = np.linalg.svd(stacked, full_matrices=False)
    v = u[:, s > tol.rank_tol]
    p = v @ dagger(v)
    return 0.5 * (p + dagger(p))


def null_space(k: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal columns spanning the kernel of ``k``.

    Singular values below ``rank_tol * max(1, sigma_max)`` count as zero.
    """
    if k.shape[0] > k.shape[1]:
        # same singular values and right vectors, much smaller SVD
        k = np.linalg.qr(k, mode="r")
    _, s, vh = np.linalg.svd(k, full_matrices=True)
    scale = max(1.0, float(s[0])) if s.size else 1.0
    r = int(np.sum(s > tol.rank_tol * scale))
    return dagger(vh[r:])


def stacked_null_space(blocks: Iterable[np.ndarray], ncols: int, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Kernel of the vertical stack of ``blocks`` without materialising it.

    The stack is folded into an ``ncols x ncols`` triangular factor by repeated
    QR, which preserves the singular values exactly in exact arithmetic.
    """
    r = np.zeros((0, ncols), dtype=np.complex128)
    pending: list[np.ndarray] = []
    rows = 0
    for b in blocks:
        pending.append(b)
        rows += b.shape[0]
        if rows >= 4 * ncols:
            r = np.linalg.qr(np.vstack([r] + pending), mode="r")
            pending, rows = [], 0
    if pending:
        r = np.vstack([r] + pending)
    if r.shape[0] == 0:
        return np.eye(ncols, dtype=np.complex128)
    return null_space(r, tol)


# Hermitian matrices <-> real vectors. For hermitian h, h' the Euclidean inner
# product of the real vectors equals trace(h h').

def herm_to_real(h: np.ndarray) -> np.ndarray:
    flat = h.reshape(*h.shape[:-2], -1)
    return np.concatenate([flat.real, flat.imag], axis=-1)


def real_to_herm(v: np.ndarray, dim: int) -> np.ndarray:
    half = dim * dim
    h = (v[..., :half] + 1j * v[..., half:]).reshape(*v.shape[:-1], dim, dim)
    return 0.5 * (h + dagger(h))


def hermitian_parts(mats: Iterable[ComplexMatrix]) -> list[ComplexMatrix]:
    """Split each operator into the two hermitian matrices spanning it with its adjoint."""
    out = []
    for x in mats:
        xd = dagger(x)
        out.append(0.5 * (x + xd))
        out.append(-0.5j * (x - xd))
    return out


def hermitian_orthonormal_basis(
    mats: Sequence[ComplexMatrix],
    dim: int,
    existing: np.ndarray | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> np.ndarray:
    """Extend ``existing`` to an HS-orthonormal hermitian basis covering ``mats``.

    ``mats`` must be hermitian. Candidates are normalised and projected off
    the current span twice (re-orthogonalised Gram-Schmidt). New directions
    are then picked by column-pivoted QR: a direction is accepted only while
    some single candidate still has a residual above ``rank_tol``. A
    per-candidate test keeps round-off in many nearly dependent candidates
    from adding up to a spurious direction. Returns the full basis as an
    array of shape ``(k, dim, dim)``; ``existing`` comes first, unchanged.
    """
    if existing is None or len(existing) == 0:
        q = np.zeros((2 * dim * dim, 0))
        existing = np.zeros((0, dim, dim), dtype=np.complex128)
    else:
        q = herm_to_real(existing).T
    if len(mats) == 0:
        return existing
    cand = herm_to_real(np.asarray(mats)).T
    norms = np.linalg.norm(cand, axis=0)
    keep = norms > tol.rank_tol
    if not np.any(keep):
        return existing
    cand = cand[:, keep] / norms[keep]
    for _ in range(2):
        cand = cand - q @ (q.T @ cand)
    cand = cand[:, np.linalg.norm(cand, axis=0) > tol.rank_tol]
    if cand.shape[1] == 0:
        return existing
    qc, rc, _ = scipy.linalg.qr(cand, mode="economic", pivoting=True)
    r = int(np.sum(np.abs(np.diag(rc)) > tol.rank_tol))
    new = qc[:, :r]
    if new.shape[1] == 0:
        return existing
    new = new - q @ (q.T @ new)
    new, _ = np.linalg.qr(new)
    added = real_to_herm(new.T, dim)
    return np.concatenate([existing, added], axis=0)


def intersect_hermitian_spans(a: np.ndarray, b: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Hermitian orthonormal basis of ``span(a) ∩ span(b)``.

    Both inputs are HS-orthonormal hermitian bases of *-closed spaces, so the
    complex intersection is the complexification of the real one.
    """
    if len(a) == 0 or len(b) == 0:
        return np.zeros((0,) + a.shape[1:], dtype=np.complex128)
    dim = a.shape[-1]
    ra, rb = herm_to_real(a).T, herm_to_real(b).T
    ns = null_space(np.hstack([ra, -rb]), tol).real
    if ns.shape[1] == 0:
        return np.zeros((0, dim, dim), dtype=np.complex128)
    vecs = ra @ ns[: len(a)]
    return hermitian_orthonormal_basis(list(real_to_herm(vecs.T, dim)), dim, tol=tol)


def random_unitary(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> ComplexMatrix:
    k = dim if rank is None else rank
    g = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def random_operator(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def random_hermitian(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    a = random_operator(dim, rng)
    return 0.5 * (a + dagger(a))
