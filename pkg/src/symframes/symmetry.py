"""Weak and strong symmetry: twirls and membership tests."""
from __future__ import annotations

import enum

import numpy as np

from .errors import DimMismatch
from .groups import FiniteAbelianRep, charge_decomposition, charge_observable
from .linalg import DEFAULT_TOL, ComplexMatrix, Tolerance, as_matrix, commutator, dagger, hs_norm


class SymmetryKind(enum.Enum):
    WEAK = "weak"
    STRONG = "strong"


def _check(rep: FiniteAbelianRep, m: ComplexMatrix) -> ComplexMatrix:
    m = as_matrix(m)
    if m.shape[0] != rep.dim:
        raise DimMismatch(f"operator dim {m.shape[0]} != representation dim {rep.dim}")
    return m


def weak_twirl(rep: FiniteAbelianRep, rho: ComplexMatrix) -> ComplexMatrix:
    """Incoherent group average ``(1/n) sum_g U(g) rho U(g)^dagger``."""
    rho = _check(rep, rho)
    return sum(u @ rho @ dagger(u) for u in rep.elements) / rep.order


def strong_twirl(rep: FiniteAbelianRep, rho: ComplexMatrix) -> ComplexMatrix:
    """Coherent group average ``(1/n^2) sum_{g,g'} U(g) rho U(g')^dagger``.

    Equal to ``P0 rho P0`` with ``P0`` the invariant-sector projector. The
    output is not renormalised; see :func:`renormalize`.
    """
    rho = _check(rep, rho)
    avg = sum(rep.elements) / rep.order
    return avg @ rho @ dagger(avg)


def strong_twirl_double_sum(rep: FiniteAbelianRep, rho: ComplexMatrix) -> ComplexMatrix:
    """Literal double sum over group pairs; quadratic in the group order."""
    rho = _check(rep, rho)
    n = rep.order
    return sum(u @ rho @ dagger(v) for u in rep.elements for v in rep.elements) / n**2


def renormalize(rho: ComplexMatrix, tol: Tolerance = DEFAULT_TOL) -> ComplexMatrix | None:
    """Rescale to unit trace; ``None`` when the trace is below ``rank_tol``."""
    t = np.trace(rho).real
    if t <= tol.rank_tol:
        return None
    return rho / t


def symmetry_residual(
    rep: FiniteAbelianRep, a: ComplexMatrix, kind: SymmetryKind, tol: Tolerance = DEFAULT_TOL
) -> float:
    """Frobenius norm of the violation of the chosen symmetry condition."""
    a = _check(rep, a)
    dec = charge_decomposition(rep, tol)
    if kind is SymmetryKind.WEAK:
        return hs_norm(commutator(charge_observable(dec, tol), a))
    p0 = dec.zero_projector
    return hs_norm(a - p0 @ a @ p0)


def is_symmetric(
    rep: FiniteAbelianRep, a: ComplexMatrix, kind: SymmetryKind, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """Weak: ``[C, a] = 0``. Strong: ``a`` supported on the zero-charge sector."""
    return symmetry_residual(rep, a, SymmetryKind(kind), tol) < tol.eq_tol
