"""Finite-dimensional *-algebras of matrices.

An algebra is stored as an HS-orthonormal basis of hermitian matrices. Such a
basis spans the algebra over the complex numbers and makes closure under the
adjoint automatic, so membership, joins, commutants and centres all reduce
to linear algebra on ``dim**2``-dimensional vectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DegenerateDraw, DimMismatch
from .linalg import (
    DEFAULT_TOL,
    ComplexMatrix,
    Tolerance,
    as_matrix,
    check_same_dim,
    eigendecompose_normal,
    herm_to_real,
    real_to_herm,
    hermitian_orthonormal_basis,
    hermitian_parts,
    hs_norm,
    intersect_hermitian_spans,
    null_space,
    range_projector,
    rank,
    stacked_null_space,
)

DEFAULT_SEED = 20250101
MAX_DRAWS = 5


@dataclass(frozen=True)
class Block:
    projector: ComplexMatrix = field(repr=False, compare=False)
    dim: int
    multiplicity: int


@dataclass(frozen=True)
class BlockStructure:
    blocks: tuple[Block, ...]

    @property
    def is_factor(self) -> bool:
        return len(self.blocks) == 1

    @property
    def profile(self) -> tuple[int, ...]:
        """Sorted block dimensions; equal profiles mean isomorphic algebras."""
        return tuple(sorted(b.dim for b in self.blocks))


class StarAlgebra:
    """A *-subalgebra of ``Lin(C^dim)`` given by a hermitian orthonormal basis.

    The algebra's unit need not be the identity: the strongly symmetric
    algebra, for instance, has the zero-charge projector as its unit.
    Structural data (unit, centre, blocks) is computed on first access and
    cached; instances are otherwise immutable.
    """

    def __init__(self, basis: np.ndarray, tol: Tolerance = DEFAULT_TOL, seed: int = DEFAULT_SEED):
        basis = np.asarray(basis, dtype=np.complex128)
        if basis.ndim != 3 or basis.shape[1] != basis.shape[2]:
            raise DimMismatch("basis must have shape (k, dim, dim)")
        self._basis = basis
        self._basis.setflags(write=False)
        self.tol = tol
        self.seed = seed

    @classmethod
    def from_spanning_set(cls, mats: Sequence[ComplexMatrix], dim: int, tol: Tolerance = DEFAULT_TOL, **kw) -> "StarAlgebra":
        """Wrap the span of a *-closed, multiplicatively closed set without closing it."""
        basis = hermitian_orthonormal_basis(hermitian_parts(mats), dim, tol=tol)
        return cls(basis, tol, **kw)

    @classmethod
    def full(cls, dim: int, tol: Tolerance = DEFAULT_TOL) -> "StarAlgebra":
        units = []
        for i in range(dim):
            for j in range(dim):
                e = np.zeros((dim, dim), dtype=np.complex128)
                e[i, j] = 1
                units.append(e)
        return cls.from_spanning_set(units, dim, tol)

    @classmethod
    def scalars(cls, dim: int, tol: Tolerance = DEFAULT_TOL) -> "StarAlgebra":
        return cls(np.eye(dim, dtype=np.complex128)[None] / np.sqrt(dim), tol)

    @classmethod
    def corner(cls, projector: ComplexMatrix, tol: Tolerance = DEFAULT_TOL, **kw) -> "StarAlgebra":
        """``P Lin(H) P``: all operators supported on the range of ``projector``."""
        p = as_matrix(projector)
        w, v = np.linalg.eigh(p)
        v = v[:, w > 0.5]
        units = [np.outer(v[:, i], v[:, j].conj()) for i in range(v.shape[1]) for j in range(v.shape[1])]
        return cls.from_spanning_set(units, p.shape[0], tol, **kw)

    @property
    def basis(self) -> np.ndarray:
        return self._basis

    @property
    def dim(self) -> int:
        return self._basis.shape[1]

    @property
    def algebra_dim(self) -> int:
        return self._basis.shape[0]

    def __len__(self) -> int:
        return self.algebra_dim

    def __repr__(self) -> str:
        return f"StarAlgebra(dim={self.dim}, algebra_dim={self.algebra_dim})"

    @cached_property
    def _flat_conj(self) -> np.ndarray:
        return self._basis.reshape(self.algebra_dim, -1).conj()

    def project(self, x: ComplexMatrix) -> ComplexMatrix:
        """Orthogonal (HS) projection of ``x`` onto the algebra."""
        coeffs = self._flat_conj @ np.asarray(x).reshape(-1)
        return np.einsum("k,kij->ij", coeffs, self._basis)

    def residuals(self, xs: np.ndarray) -> np.ndarray:
        """HS distances of each ``xs[k]`` from the algebra."""
        xs = np.asarray(xs, dtype=np.complex128)
        if xs.shape[-1] != self.dim:
            raise DimMismatch(f"operator dim {xs.shape[-1]} != algebra dim {self.dim}")
        flat = xs.reshape(len(xs), -1)
        coeffs = flat @ self._flat_conj.T
        rest = flat - coeffs @ self._flat_conj.conj()
        return np.linalg.norm(rest, axis=1)

    def residual(self, x: ComplexMatrix) -> float:
        x = as_matrix(x)
        return float(self.residuals(x[None])[0])

    def contains(self, x: ComplexMatrix) -> bool:
        return self.residual(x) < self.tol.eq_tol

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def contains_algebra(self, other: "StarAlgebra") -> bool:
        if other.algebra_dim == 0:
            return True
        return bool(np.all(self.residuals(other.basis) < self.tol.eq_tol))

    def same_span(self, other: "StarAlgebra") -> bool:
        return self.algebra_dim == other.algebra_dim and self.contains_algebra(other)

    @cached_property
    def unit(self) -> ComplexMatrix:
        """Support projector of the algebra, which is its multiplicative unit."""
        if self.algebra_dim == 0:
            return np.zeros((self.dim, self.dim), dtype=np.complex128)
        return range_projector(list(self._basis), self.tol)

    @property
    def contains_identity(self) -> bool:
        return self.contains(np.eye(self.dim))

    def closure_residuals(self) -> tuple[float, float]:
        """Largest residuals of adjoints and of pairwise products off the span."""
        if self.algebra_dim == 0:
            return 0.0, 0.0
        adj = float(np.max(self.residuals(self._basis.conj().transpose(0, 2, 1))))
        prod = max(float(np.max(self.residuals(np.matmul(a, self._basis)))) for a in self._basis)
        return adj, prod

    @cached_property
    def commutant(self) -> "StarAlgebra":
        return commutant(self)

    @cached_property
    def center(self) -> "StarAlgebra":
        return center(self)

    @cached_property
    def blocks(self) -> BlockStructure:
        return block_decomposition(self)

    @property
    def is_factor(self) -> bool:
        return self.blocks.is_factor

    def unitization(self) -> "StarAlgebra":
        """The algebra with the identity adjoined; ``self`` when already unital."""
        if self.contains_identity:
            return self
        mats = list(self._basis) + [np.eye(self.dim, dtype=np.complex128)]
        return StarAlgebra.from_spanning_set(mats, self.dim, self.tol, seed=self.seed)

    def double_commutant_holds(self) -> bool:
        """Bicommutant check by mutual containment.

        For a non-unital algebra ``A'' = A + C 1``, so the comparison is made
        against the unitization.
        """
        target = self.unitization()
        dc = self.commutant.commutant
        return dc.contains_algebra(target) and target.contains_algebra(dc)

    def report(self) -> dict:
        bs = self.blocks
        return {
            "dim": self.dim,
            "algebra_dim": self.algebra_dim,
            "center_dim": self.center.algebra_dim,
            "blocks": [{"dim": b.dim, "multiplicity": b.multiplicity} for b in bs.blocks],
            "is_factor": bs.is_factor,
        }


# above this many hermitian generators, closure goes through the bicommutant
_LETTER_LIMIT = 8


def _left_products(gens: np.ndarray, new: np.ndarray) -> np.ndarray:
    return np.einsum("aij,bjk->abik", gens, new).reshape(-1, new.shape[1], new.shape[2])


def _word_closure(letters: np.ndarray, dim: int, adjoin_identity: bool, tol: Tolerance) -> np.ndarray:
    seeds = list(letters)
    if adjoin_identity:
        seeds.insert(0, np.eye(dim, dtype=np.complex128))
    basis = hermitian_orthonormal_basis(seeds, dim, tol=tol)
    new = basis
    while len(new):
        before = len(basis)
        prods = _left_products(letters, new)
        basis = hermitian_orthonormal_basis(hermitian_parts(prods), dim, existing=basis, tol=tol)
        new = basis[before:]
    return basis


def span_closure(
    generators: Sequence[ComplexMatrix],
    tol: Tolerance = DEFAULT_TOL,
    adjoin_identity: bool = True,
    seed: int = DEFAULT_SEED,
) -> StarAlgebra:
    """Smallest *-algebra containing ``generators`` (and the identity by default).

    With few generators the algebra is built as the span of words in their
    hermitian parts: each round left-multiplies the newest basis elements by
    every letter and re-orthonormalises with ``rank_tol`` truncation until
    the dimension stops growing. Reversed words are adjoints, so the span is
    *-closed.

    With many generators long words would pile up round-off, so the unital
    algebra is taken as the bicommutant of the generators instead, and cut
    down to their support when no identity is wanted.
    """
    if len(generators) == 0:
        raise ValueError("need at least one generator")
    gens = [as_matrix(g) for g in generators]
    dim = check_same_dim(*gens)
    span = hermitian_orthonormal_basis(hermitian_parts(gens), dim, tol=tol)
    if len(span) <= _LETTER_LIMIT:
        return StarAlgebra(_word_closure(span, dim, adjoin_identity, tol), tol, seed)
    unital = commutant_of_set(commutant_of_set(span, tol, seed), tol, seed)
    if adjoin_identity:
        return StarAlgebra(unital, tol, seed)
    p = range_projector(list(span), tol)
    if hs_norm(p - np.eye(dim)) < tol.eq_tol:
        return StarAlgebra(unital, tol, seed)
    cut = hermitian_orthonormal_basis([p @ b @ p for b in unital], dim, tol=tol)
    return StarAlgebra(cut, tol, seed)


# number of fresh random combinations used to verify a computed commutant
_CHECKS = 3
# eigenvalues of the generic element closer than this fraction of its spread share a block
_GROUP_GAP = 1e-3


def _commutator_residual(cands: np.ndarray, m: np.ndarray) -> float:
    """Largest entry of ``[c, m]`` over the stack ``cands``, using two gemms."""
    if len(cands) == 0:
        return 0.0
    a, d, _ = cands.shape
    cm = (cands.reshape(a * d, d) @ m).reshape(a, d, d)
    mc = (m @ cands.transpose(1, 0, 2).reshape(d, a * d)).reshape(d, a, d).transpose(1, 0, 2)
    return float(np.max(np.abs(cm - mc)))


def _random_combinations(mats: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    combos = np.einsum("rk,kij->rij", rng.standard_normal((k, len(mats))), mats)
    norms = np.linalg.norm(combos, axis=(1, 2))
    return combos / np.where(norms > 0, norms, 1)[:, None, None]


def _kernel_in_eigenbasis(groups: list[np.ndarray], constraints: list[np.ndarray], dim: int, tol: Tolerance):
    """Block-diagonal ``Y`` (blocks given by ``groups``) with ``[Y, h] = 0`` for each ``h``.

    Returns a list of ``dim x dim`` matrices spanning the solution space.
    """
    sizes = [len(g) for g in groups]
    n_unknowns = sum(m * m for m in sizes)
    rows = []
    for h in constraints:
        cols = []
        for idx in groups:
            # column (i, j): vec(E_ij h - h E_ij) over (a, b)
            m = len(idx)
            block = np.zeros((dim, dim, m, m), dtype=np.complex128)
            for jj, j in enumerate(idx):
                for ii, i in enumerate(idx):
                    block[i, :, ii, jj] += h[j, :]
                    block[:, j, ii, jj] -= h[:, i]
            cols.append(block.reshape(dim * dim, m * m))
        rows.append(np.hstack(cols))
    if rows:
        ns = null_space(np.vstack(rows), tol)
    else:
        ns = np.eye(n_unknowns, dtype=np.complex128)
    out = []
    for k in range(ns.shape[1]):
        y = np.zeros((dim, dim), dtype=np.complex128)
        pos = 0
        for idx in groups:
            m = len(idx)
            y[np.ix_(idx, idx)] = ns[pos : pos + m * m, k].reshape(m, m)
            pos += m * m
        out.append(y)
    return out


def _star_closed_basis(sols: list[np.ndarray], d: int) -> np.ndarray:
    """Hermitian orthonormal basis of a *-closed span given by orthonormal ``sols``.

    The span has real dimension ``len(sols)`` in hermitian matrices, so the
    top singular directions of the hermitian parts are taken; this avoids
    renormalising small, noise-dominated parts.
    """
    k = len(sols)
    if k == 0:
        return np.zeros((0, d, d), dtype=np.complex128)
    if k == d * d:
        return _full_basis(d)
    real = herm_to_real(np.array(hermitian_parts(sols)))
    w, u = np.linalg.eigh(real @ real.T)
    top = u[:, ::-1][:, :k] / np.sqrt(w[::-1][:k])
    return real_to_herm(top.T @ real, d)


def _commutant_direct(mats: np.ndarray, tol: Tolerance) -> np.ndarray:
    d = mats.shape[-1]
    eye = np.eye(d)
    blocks = (np.kron(b, eye) - np.kron(eye, b.T) for b in mats)
    ns = stacked_null_space(blocks, d * d, tol)
    return _star_closed_basis([ns[:, i].reshape(d, d) for i in range(ns.shape[1])], d)


def commutant_of_set(mats: np.ndarray, tol: Tolerance = DEFAULT_TOL, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Hermitian orthonormal basis of the operators commuting with every (hermitian) ``mats[k]``.

    A generic element ``h1`` of the span fixes an eigenbasis; the commutant
    is block diagonal there, and a second generic element cuts it down.
    The result is then checked against every element of ``mats``; if the
    draw was unlucky the full linear system is solved instead.
    """
    mats = np.asarray(mats, dtype=np.complex128)
    d = mats.shape[-1]
    if len(mats) == 0:
        return _full_basis(d)
    rng = np.random.default_rng(seed)
    h1 = _random_combinations(mats, 1, rng)[0]
    w, v = np.linalg.eigh(h1)
    # merging close eigenvalues only adds unknowns; splitting them makes the
    # eigenvectors ill-conditioned
    gap = _GROUP_GAP * max(float(w[-1] - w[0]), tol.rank_tol)
    groups, start = [], 0
    for i in range(1, d + 1):
        if i == d or w[i] - w[i - 1] > gap:
            groups.append(np.arange(start, i))
            start = i
    constraints = [] if len(mats) == 1 else list(_random_combinations(mats, 1, rng))
    for _ in range(3):
        ys = _kernel_in_eigenbasis(groups, [v.conj().T @ h @ v for h in constraints], d, tol)
        basis = _star_closed_basis([v @ y @ v.conj().T for y in ys], d)
        # a non-commuting candidate fails against a random combination with probability one
        checks = mats if len(mats) <= _CHECKS else _random_combinations(mats, _CHECKS, rng)
        failed = [h for h in checks if _commutator_residual(basis, h) >= tol.eq_tol]
        if not failed:
            return basis
        constraints.extend(failed)
    return _commutant_direct(mats, tol)


def _full_basis(d: int) -> np.ndarray:
    """Hermitian orthonormal basis of all ``d x d`` matrices."""
    out = []
    for i in range(d):
        e = np.zeros((d, d), dtype=np.complex128)
        e[i, i] = 1
        out.append(e)
        for j in range(i + 1, d):
            e = np.zeros((d, d), dtype=np.complex128)
            e[i, j] = e[j, i] = 1 / np.sqrt(2)
            out.append(e)
            e = np.zeros((d, d), dtype=np.complex128)
            e[i, j], e[j, i] = -1j / np.sqrt(2), 1j / np.sqrt(2)
            out.append(e)
    return np.array(out)


def commutant(alg: StarAlgebra) -> StarAlgebra:
    """All operators commuting with every element of ``alg``."""
    return StarAlgebra(commutant_of_set(alg.basis, alg.tol, alg.seed), alg.tol, alg.seed)


def center(alg: StarAlgebra) -> StarAlgebra:
    """Intersection of ``alg`` with its commutant."""
    a, b = alg.basis, alg.commutant.basis
    if len(b) < len(a):
        a, b = b, a
    basis = intersect_hermitian_spans(a, b, alg.tol)
    return StarAlgebra(basis, alg.tol, alg.seed)


def block_decomposition(alg: StarAlgebra) -> BlockStructure:
    """Wedderburn blocks from the spectral projectors of a generic central element.

    A random real combination of the hermitian centre basis is diagonalised;
    its eigenprojectors, cut down to the algebra's unit, are the minimal
    central projectors. Each block ``P alg`` is a full matrix algebra whose
    size is the square root of its dimension. The draw is retried with fresh
    randomness when it merges blocks.

    Raises:
        DegenerateDraw: if ``MAX_DRAWS`` draws all failed to separate the blocks.
    """
    tol = alg.tol
    unit = alg.unit
    zc = alg.center.basis
    n_blocks = len(zc)
    if n_blocks == 0:
        return BlockStructure(())
    rng = np.random.default_rng(alg.seed)
    for _ in range(MAX_DRAWS):
        z = np.einsum("k,kij->ij", rng.standard_normal(n_blocks), zc)
        projs = []
        for _, p in eigendecompose_normal(z, tol):
            q = p @ unit
            if hs_norm(q) > tol.rank_tol:
                projs.append(0.5 * (q + q.conj().T))
        if len(projs) == n_blocks:
            break
    else:
        raise DegenerateDraw(f"{MAX_DRAWS} central draws failed to separate {n_blocks} blocks")
    blocks = []
    for p in projs:
        sub = herm_to_real(np.einsum("ij,kjl->kil", p, alg.basis))
        k = rank(sub.T, tol)
        size = int(round(np.sqrt(k)))
        if size * size != k:
            raise ValueError(f"block of dimension {k} is not a full matrix algebra")
        r = int(round(np.trace(p).real))
        blocks.append(Block(p, size, r // size))
    # deterministic order: larger blocks first, then by the first basis index they touch
    blocks.sort(key=lambda b: (-b.dim, int(np.argmax(np.abs(np.diag(b.projector)) > 1e-6))))
    return BlockStructure(tuple(blocks))


def contains(alg: StarAlgebra, x: ComplexMatrix) -> bool:
    return alg.contains(x)


def join(a: StarAlgebra, b: StarAlgebra) -> StarAlgebra:
    """Algebra generated by two algebras; unital iff either input is."""
    if a.dim != b.dim:
        raise DimMismatch(f"algebras act on dims {a.dim} and {b.dim}")
    gens = list(a.basis) + list(b.basis)
    return span_closure(gens, a.tol, adjoin_identity=a.contains_identity or b.contains_identity, seed=a.seed)


def join_all(algs: Sequence[StarAlgebra]) -> StarAlgebra:
    if not algs:
        raise ValueError("need at least one algebra")
    out = algs[0]
    for other in algs[1:]:
        out = join(out, other)
    return out


@dataclass(frozen=True)
class IsomorphismReport:
    isomorphic: bool
    reason: str
    profiles: tuple[tuple[int, ...], tuple[int, ...]]

    def to_dict(self) -> dict:
        return {"isomorphic": self.isomorphic, "reason": self.reason, "profiles": [list(p) for p in self.profiles]}


def find_isomorphism(a: StarAlgebra, b: StarAlgebra) -> IsomorphismReport:
    """Decide *-isomorphism by comparing Wedderburn block profiles."""
    pa, pb = a.blocks.profile, b.blocks.profile
    if pa == pb:
        return IsomorphismReport(True, f"matching block profiles {list(pa)}", (pa, pb))
    return IsomorphismReport(False, f"block profiles differ: {list(pa)} vs {list(pb)}", (pa, pb))
