"""Relativization, perspectival and collaborative algebras, charge access.

Systems are particles on a ring of ``n`` sites, each with Hilbert space
``C^n`` and the global shift as symmetry. Choosing one system as the frame,
the relativization map

    yen(T) = sum_g |g><g| (x) U(g) T U(g)^dagger

sends an operator on the other systems to a frame-relative operator; its
image is that frame's perspectival algebra.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .algebra import DEFAULT_SEED, StarAlgebra, find_isomorphism, join_all, span_closure
from .errors import DimMismatch, NotCentral
from .groups import (
    FiniteAbelianRep,
    charge_decomposition,
    charge_observable,
    cyclic_shift,
    local_operator,
    shift_representation,
)
from .linalg import (
    DEFAULT_TOL,
    ComplexMatrix,
    Tolerance,
    as_matrix,
    commutator,
    dagger,
    max_abs,
    permute_subsystems,
)
from .symmetry import SymmetryKind, is_symmetric


def yen(rep: FiniteAbelianRep, t: ComplexMatrix) -> ComplexMatrix:
    """Relativize ``t`` (acting on the observed systems) to a regular frame of size ``rep.order``.

    The frame is the outer tensor factor of the result.
    """
    t = as_matrix(t)
    if t.shape[0] != rep.dim:
        raise DimMismatch(f"operator dim {t.shape[0]} != observed dim {rep.dim}")
    n = rep.order
    out = np.zeros((n * rep.dim, n * rep.dim), dtype=np.complex128)
    for g, u in enumerate(rep.elements):
        out[g * rep.dim : (g + 1) * rep.dim, g * rep.dim : (g + 1) * rep.dim] = u @ t @ dagger(u)
    return out


def frame_representation(rep: FiniteAbelianRep) -> FiniteAbelianRep:
    """Joint action on frame (x) observed: shift the frame label together with ``rep``."""
    return FiniteAbelianRep(rep.order, np.kron(cyclic_shift(rep.order), rep.generator))


def matrix_units(dim: int) -> list[ComplexMatrix]:
    units = []
    for i in range(dim):
        for j in range(dim):
            e = np.zeros((dim, dim), dtype=np.complex128)
            e[i, j] = 1
            units.append(e)
    return units


def perspectival_algebra(rep: FiniteAbelianRep, tol: Tolerance = DEFAULT_TOL) -> StarAlgebra:
    """Image of ``yen`` on a full operator basis of the observed systems (frame outer)."""
    # yen is a unital *-homomorphism, so the image of a basis already spans an algebra
    images = [yen(rep, e) for e in matrix_units(rep.dim)]
    return StarAlgebra.from_spanning_set(images, rep.order * rep.dim, tol)


def system_perspective(
    n_sites: int, n_systems: int, frame: int, tol: Tolerance = DEFAULT_TOL, seed: int = DEFAULT_SEED
) -> StarAlgebra:
    """Perspectival algebra of system ``frame`` on all the others, in natural factor order."""
    if not 0 <= frame < n_systems:
        raise IndexError(f"frame {frame} outside 0..{n_systems - 1}")
    dims = [n_sites] * n_systems
    others = [i for i in range(n_systems) if i != frame]
    if others:
        rep = shift_representation(n_sites, len(others))
    else:
        rep = FiniteAbelianRep(n_sites, np.eye(1))
    # yen's output lives on (frame, *others); move factors back to 0..N-1
    order = [frame] + others
    perm = [order.index(i) for i in range(n_systems)]
    images = [permute_subsystems(yen(rep, e), dims, perm) for e in matrix_units(rep.dim)]
    return StarAlgebra.from_spanning_set(images, n_sites**n_systems, tol, seed=seed)


def strong_perspective(alg: StarAlgebra, p0: ComplexMatrix) -> StarAlgebra:
    """Compression ``P0 alg P0`` of a weak perspectival algebra to the zero-charge sector."""
    mats = [p0 @ b @ p0 for b in alg.basis]
    return StarAlgebra.from_spanning_set(mats, alg.dim, alg.tol, seed=alg.seed)


def collaborative_algebra(perspectivals: Sequence[StarAlgebra]) -> StarAlgebra:
    """Algebraic span of the union of the perspectival algebras."""
    return join_all(list(perspectivals))


def total_charge(rep: FiniteAbelianRep, tol: Tolerance = DEFAULT_TOL) -> ComplexMatrix:
    return charge_observable(charge_decomposition(rep, tol), tol)


def charge_accessible(rep: FiniteAbelianRep, collaborative: StarAlgebra, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether the total charge observable lies in ``collaborative``."""
    if collaborative.dim != rep.dim:
        raise DimMismatch(f"algebra dim {collaborative.dim} != representation dim {rep.dim}")
    return collaborative.contains(total_charge(rep, tol))


@dataclass
class PerspectiveReport:
    perspectival_algebras: dict[str, StarAlgebra]
    collaborative: StarAlgebra
    charge_in_collaborative: bool
    charge_in_each_perspective: list[bool]

    def to_dict(self) -> dict:
        return {
            "perspectives": {name: a.report() for name, a in self.perspectival_algebras.items()},
            "collaborative": self.collaborative.report(),
            "charge_in_collaborative": self.charge_in_collaborative,
            "charge_in_each_perspective": self.charge_in_each_perspective,
        }


def perspective_report(
    rep: FiniteAbelianRep, perspectivals: dict[str, StarAlgebra], tol: Tolerance = DEFAULT_TOL
) -> PerspectiveReport:
    collab = collaborative_algebra(list(perspectivals.values()))
    charge = total_charge(rep, tol)
    return PerspectiveReport(
        dict(perspectivals),
        collab,
        collab.contains(charge),
        [a.contains(charge) for a in perspectivals.values()],
    )


def yen_is_symmetric(rep: FiniteAbelianRep, t: ComplexMatrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    return is_symmetric(frame_representation(rep), yen(rep, t), SymmetryKind.WEAK, tol)


# --- momentum ambiguity -------------------------------------------------------


def central_shift(
    gen_set: Sequence[ComplexMatrix], central: ComplexMatrix, alpha: float, tol: Tolerance = DEFAULT_TOL
) -> list[ComplexMatrix]:
    """Return ``g + alpha * central`` for each generator.

    Raises:
        NotCentral: if ``central`` fails to commute with some generator, or the
            shifted set does not reproduce the original pairwise commutators.
    """
    gens = [as_matrix(g) for g in gen_set]
    z = as_matrix(central)
    for g in gens:
        if max_abs(commutator(g, z)) >= tol.eq_tol:
            raise NotCentral("shift operator does not commute with every generator")
    shifted = [g + alpha * z for g in gens]
    dev = commutator_deviation(gens, shifted)
    if dev >= tol.eq_tol:
        raise NotCentral(f"commutators changed by {dev:.3e}")
    return shifted


def commutator_deviation(a: Sequence[ComplexMatrix], b: Sequence[ComplexMatrix]) -> float:
    """Largest entrywise change of ``[a_i, a_j]`` versus ``[b_i, b_j]`` over all pairs."""
    worst = 0.0
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            worst = max(worst, max_abs(commutator(a[i], a[j]) - commutator(b[i], b[j])))
    return worst


def half_inverse(n: int) -> int | None:
    """Modular inverse of 2 in Z_n, or ``None`` when ``n`` is even."""
    if n % 2 == 0:
        return None
    return pow(2, -1, n)


def generated_by_exponentials(gens: Sequence[ComplexMatrix], tol: Tolerance = DEFAULT_TOL) -> StarAlgebra:
    """Algebra generated by the unitaries ``exp(i g)``.

    For observables whose spectra sit on the lattice ``2 pi Z / n`` this is the
    algebra of the symmetry transformations they generate; spectra are then
    read modulo ``2 pi``, the way charges of a cyclic group are.
    """
    return span_closure([scipy.linalg.expm(1j * as_matrix(g)) for g in gens], tol)


@dataclass
class AmbiguityWitness:
    n_sites: int
    alpha: float
    positions: list[ComplexMatrix] = field(repr=False)
    momenta: list[ComplexMatrix] = field(repr=False)
    shifted_momenta: list[ComplexMatrix] = field(repr=False)
    commutator_deviation: float
    join_plain: StarAlgebra
    join_shifted: StarAlgebra
    charge_in_plain: bool
    charge_in_shifted: bool

    @property
    def differs(self) -> bool:
        return self.charge_in_plain != self.charge_in_shifted

    def to_dict(self) -> dict:
        return {
            "n_sites": self.n_sites,
            "alpha": self.alpha,
            "commutator_deviation": round(self.commutator_deviation, 15),
            "join_plain": self.join_plain.report(),
            "join_shifted": self.join_shifted.report(),
            "charge_in_plain": self.charge_in_plain,
            "charge_in_shifted": self.charge_in_shifted,
            "joins_differ": self.differs,
        }


def momentum_ambiguity(n_sites: int = 3, tol: Tolerance = DEFAULT_TOL) -> AmbiguityWitness:
    """Two systems on Z_n: local momenta versus momenta shifted by ``-(1/2) * total``.

    The local charges ``C_1, C_2`` play the role of the individual momenta and
    ``C`` that of the total momentum; the factor 1/2 is the inverse of 2 modulo
    ``n``. Both generator sets include the relative position, so commutators
    are non-trivial, and they agree pair by pair since ``C`` is central.

    Raises:
        ValueError: for even ``n``, where 2 has no inverse.
    """
    k = half_inverse(n_sites)
    if k is None:
        raise ValueError(f"1/2 is not available in Z_{n_sites}")
    n = n_sites
    dims = [n, n]
    s = cyclic_shift(n)
    local = [
        total_charge(FiniteAbelianRep(n, local_operator(s, i, dims)), tol) for i in range(2)
    ]
    c_tot = total_charge(shift_representation(n, 2), tol)
    rel = np.diag([2 * np.pi * ((b - a) % n) / n for a in range(n) for b in range(n)]).astype(np.complex128)
    alpha = float(-k)
    shifted = central_shift(local, c_tot, alpha, tol)
    plain_set = [rel] + local
    shifted_set = [rel] + shifted
    plain = generated_by_exponentials(plain_set, tol)
    moved = generated_by_exponentials(shifted_set, tol)
    return AmbiguityWitness(
        n,
        alpha,
        [rel],
        local,
        shifted,
        commutator_deviation(plain_set, shifted_set),
        plain,
        moved,
        plain.contains(c_tot),
        moved.contains(c_tot),
    )


# --- weak vs strong comparison-----------------------------------------------------------


@dataclass
class ApproachRow:
    kind: SymmetryKind
    symmetric_algebra: StarAlgebra
    perspectives: dict[str, StarAlgebra]
    collaborative: StarAlgebra
    reversible: bool
    charge_accessible: bool
    isomorphism_reason: str

    def to_dict(self) -> dict:
        return {
            "approach": self.kind.value,
            "symmetric_algebra": self.symmetric_algebra.report(),
            "nature": "factor" if self.symmetric_algebra.is_factor else "non-factor",
            "reversible": self.reversible,
            "isomorphism": self.isomorphism_reason,
            "charge_accessible": self.charge_accessible,
            "perspectives": {k: v.report() for k, v in self.perspectives.items()},
            "collaborative": self.collaborative.report(),
        }


def approach_rows(
    n_sites: int, n_systems: int, tol: Tolerance = DEFAULT_TOL, seed: int = DEFAULT_SEED
) -> dict[str, ApproachRow]:
    """Compute the weak/strong comparison for ``n_systems`` particles on Z_n.

    Reversibility is decided by whether the symmetric algebra is isomorphic to
    the first system's perspectival algebra; accessibility by whether the
    total charge lies in the join of all perspectival algebras.
    """
    rep = shift_representation(n_sites, n_systems)
    dec = charge_decomposition(rep, tol)
    charge = charge_observable(dec, tol)
    p0 = dec.zero_projector

    weak_persp = {f"persp_{k}": system_perspective(n_sites, n_systems, k, tol, seed) for k in range(n_systems)}
    strong_persp = {k: strong_perspective(a, p0) for k, a in weak_persp.items()}
    a_weak = span_closure([charge], tol, seed=seed).commutant
    a_strong = StarAlgebra.corner(p0, tol, seed=seed)

    rows = {}
    for kind, sym, persp in (
        (SymmetryKind.WEAK, a_weak, weak_persp),
        (SymmetryKind.STRONG, a_strong, strong_persp),
    ):
        collab = collaborative_algebra(list(persp.values()))
        iso = find_isomorphism(sym, next(iter(persp.values())))
        rows[kind.value] = ApproachRow(
            kind, sym, persp, collab, iso.isomorphic, collab.contains(charge), iso.reason
        )
    return rows
