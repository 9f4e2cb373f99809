"""Cyclic groups Z_n, their shift representations and charge sectors.

A symmetry can be handed over as a representation, as its generating unitary,
or as a hermitian charge observable with ``exp(iC) = U(1)``; the helpers here
convert between the three and expose the sector decomposition they share.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import DimMismatch, DimOverflow, IncompleteDecomposition, IndexOutOfRange
from .linalg import (
    DEFAULT_TOL,
    ComplexMatrix,
    Tolerance,
    as_matrix,
    dagger,
    eigendecompose_normal,
    is_unitary,
    max_abs,
    tensor_power,
)

DEFAULT_DIM_CAP = 4096


def cyclic_shift(n: int) -> ComplexMatrix:
    """Single-site shift ``|m> -> |m+1 mod n>``."""
    return np.roll(np.eye(n, dtype=np.complex128), 1, axis=0)


def clock(n: int) -> ComplexMatrix:
    """Diagonal ``|m> -> e^{2 i pi m / n} |m>``, the position-phase partner of the shift."""
    return np.diag(np.exp(2j * np.pi * np.arange(n) / n))


@dataclass(frozen=True, eq=False)
class FiniteAbelianRep:
    """Unitary representation of Z_n given by its generator ``U(1)``.

    ``elements[g]`` is ``U(g) = U(1)^g``.
    """

    order: int
    generator: ComplexMatrix = field(repr=False)

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("group order must be positive")
        object.__setattr__(self, "generator", as_matrix(self.generator))

    @property
    def dim(self) -> int:
        return self.generator.shape[0]

    @cached_property
    def elements(self) -> tuple[ComplexMatrix, ...]:
        out = [np.eye(self.dim, dtype=np.complex128)]
        for _ in range(1, self.order):
            out.append(self.generator @ out[-1])
        return tuple(out)

    def __call__(self, g: int) -> ComplexMatrix:
        return self.elements[g % self.order]

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> None:
        """Check unitarity and ``U(1)^n = I``; together these give the group law."""
        if not is_unitary(self.generator, tol):
            raise ValueError("generator is not unitary")
        closing = self.generator @ self.elements[-1]
        if max_abs(closing - np.eye(self.dim)) >= tol.eq_tol:
            raise ValueError(f"generator does not satisfy U^{self.order} = I")

    def tensor(self, other: "FiniteAbelianRep") -> "FiniteAbelianRep":
        """Diagonal action of the same Z_n on a product space (left factor outer)."""
        if other.order != self.order:
            raise ValueError("cannot combine representations of different groups")
        return FiniteAbelianRep(self.order, np.kron(self.generator, other.generator))

    def to_dict(self) -> dict:
        return {"order": self.order, "dim": self.dim, "generator": matrix_to_json(self.generator)}

    @classmethod
    def from_dict(cls, doc: dict) -> "FiniteAbelianRep":
        gen = matrix_from_json(doc["generator"], doc.get("dim"))
        return cls(int(doc["order"]), gen)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "FiniteAbelianRep":
        return cls.from_dict(json.loads(text))


def matrix_to_json(m: ComplexMatrix) -> list[list[float]]:
    """Row-major list of ``[re, im]`` pairs."""
    return [[float(z.real), float(z.imag)] for z in np.asarray(m).ravel()]


def matrix_from_json(entries, dim: int | None = None) -> ComplexMatrix:
    """Inverse of :func:`matrix_to_json`; nested rows of pairs are accepted too."""
    arr = np.asarray(entries, dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("matrix entries must be [re, im] pairs")
    z = arr[..., 0] + 1j * arr[..., 1]
    if z.ndim == 1:
        d = int(round(np.sqrt(z.size)))
        if d * d != z.size:
            raise DimMismatch(f"{z.size} entries do not form a square matrix")
        z = z.reshape(d, d)
    if dim is not None and z.shape != (dim, dim):
        raise DimMismatch(f"declared dim {dim} but matrix has shape {z.shape}")
    return as_matrix(z)


def shift_representation(n_sites: int, n_systems: int, dim_cap: int = DEFAULT_DIM_CAP) -> FiniteAbelianRep:
    """Global translation of ``n_systems`` particles on a ring of ``n_sites`` sites.

    Raises:
        DimOverflow: if ``n_sites ** n_systems`` exceeds ``dim_cap``.
    """
    if n_sites < 2 or n_systems < 1:
        raise ValueError("need n_sites >= 2 and n_systems >= 1")
    if n_sites**n_systems > dim_cap:
        raise DimOverflow(f"dimension {n_sites}**{n_systems} exceeds cap {dim_cap}")
    return FiniteAbelianRep(n_sites, tensor_power(cyclic_shift(n_sites), n_systems))


def trivial_representation(order: int, dim: int) -> FiniteAbelianRep:
    return FiniteAbelianRep(order, np.eye(dim, dtype=np.complex128))


@dataclass(frozen=True, eq=False)
class Sector:
    charge: int
    eigenvalue: complex
    projector: ComplexMatrix = field(repr=False)
    dim: int


@dataclass(frozen=True, eq=False)
class ChargeDecomposition:
    """Charge sectors of a representation, ordered by charge label."""

    order: int
    sectors: tuple[Sector, ...]

    @property
    def dim(self) -> int:
        return self.sectors[0].projector.shape[0]

    @property
    def charges(self) -> list[int]:
        return [s.charge for s in self.sectors]

    @property
    def dims(self) -> list[int]:
        return [s.dim for s in self.sectors]

    def projector(self, charge: int) -> ComplexMatrix:
        """Projector onto a charge sector; zero if the charge does not occur."""
        for s in self.sectors:
            if s.charge == charge % self.order:
                return s.projector
        return np.zeros((self.dim, self.dim), dtype=np.complex128)

    @property
    def zero_projector(self) -> ComplexMatrix:
        return self.projector(0)

    @cached_property
    def eigenbasis(self) -> ComplexMatrix:
        """Unitary whose columns are orthonormal sector bases, grouped by charge."""
        cols = []
        for s in self.sectors:
            w, v = np.linalg.eigh(s.projector)
            cols.append(v[:, w > 0.5])
        return np.hstack(cols)

    def in_eigenbasis(self, m: ComplexMatrix) -> ComplexMatrix:
        w = self.eigenbasis
        return dagger(w) @ m @ w

    def block_mask(self, charges=None) -> np.ndarray:
        """Boolean mask, in the eigenbasis, of the diagonal blocks of ``charges`` (all by default)."""
        keep = set(self.charges if charges is None else charges)
        labels = np.concatenate([[s.charge] * s.dim for s in self.sectors])
        sel = np.isin(labels, list(keep))
        return (labels[:, None] == labels[None, :]) & sel[:, None] & sel[None, :]


def charge_decomposition(rep: FiniteAbelianRep, tol: Tolerance = DEFAULT_TOL) -> ChargeDecomposition:
    """Sectors of the generator, labelled by ``c`` with eigenvalue ``e^{2 i pi c / n}``."""
    n = rep.order
    sectors = []
    for lam, p in eigendecompose_normal(rep.generator, tol):
        c = int(round(float(np.angle(lam)) * n / (2 * np.pi))) % n
        expected = np.exp(2j * np.pi * c / n)
        if abs(lam - expected) > max(tol.rank_tol, 1e-6):
            raise ValueError(f"eigenvalue {lam} is not an {n}-th root of unity")
        sectors.append(Sector(c, complex(expected), p, int(round(np.trace(p).real))))
    sectors.sort(key=lambda s: s.charge)
    return ChargeDecomposition(n, tuple(sectors))


def charge_observable(dec: ChargeDecomposition, tol: Tolerance = DEFAULT_TOL) -> ComplexMatrix:
    """Hermitian ``C = sum_c (2 pi c / n) P_c`` with ``exp(iC)`` the generator.

    Raises:
        IncompleteDecomposition: if the sector projectors do not sum to identity.
    """
    total = sum(s.projector for s in dec.sectors)
    if max_abs(total - np.eye(dec.dim)) >= tol.eq_tol:
        raise IncompleteDecomposition("sector projectors do not sum to the identity")
    c = sum((2 * np.pi * s.charge / dec.order) * s.projector for s in dec.sectors)
    return 0.5 * (c + dagger(c))


def exp_i(c: ComplexMatrix) -> ComplexMatrix:
    return scipy.linalg.expm(1j * c)


def group_average(rep: FiniteAbelianRep) -> ComplexMatrix:
    """``(1/n) sum_g U(g)``, the projector onto the invariant sector."""
    return sum(rep.elements) / rep.order


def charge_eigenstate(n: int, c: int, r: int) -> np.ndarray:
    """``|c; r> = n^{-1/2} sum_m e^{-2 i pi m c / n} |m, m + r>`` for two systems on Z_n.

    Only ``n = 3`` is supported, matching the two-particle three-site example.
    """
    if n != 3:
        raise ValueError("charge_eigenstate is defined for n = 3 only")
    if not (0 <= c < n and 0 <= r < n):
        raise IndexOutOfRange(f"(c, r) = ({c}, {r}) outside Z_{n}")
    psi = np.zeros(n * n, dtype=np.complex128)
    for m in range(n):
        psi[m * n + (m + r) % n] += np.exp(-2j * np.pi * m * c / n)
    return psi / np.sqrt(n)


def local_operator(op: ComplexMatrix, site: int, dims: list[int]) -> ComplexMatrix:
    """Embed ``op`` acting on factor ``site`` of a product space."""
    if op.shape[0] != dims[site]:
        raise DimMismatch("operator does not match the factor dimension")
    left = int(np.prod(dims[:site]))
    right = int(np.prod(dims[site + 1 :]))
    return np.kron(np.kron(np.eye(left), op), np.eye(right))
