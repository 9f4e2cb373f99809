"""Weak and strong symmetry, quantum reference frames and perspectival algebras.

Submodules:
    linalg: tolerances, tensor products, spectral and null-space helpers.
    groups: finite cyclic representations and charge sectors.
    symmetry: weak and strong twirls and symmetry tests.
    algebra: finite-dimensional *-algebras (closure, commutant, centre, blocks).
    perspectives: relativization map, perspectival and collaborative algebras.
    circuits: named-wire circuits compiled to unitaries.
    scenario: the two-path apparatus with Alice, Bob and Eve.
"""
from .algebra import StarAlgebra, commutant, center, block_decomposition, contains, join, span_closure
from .errors import (
    DegenerateDraw,
    DimMismatch,
    DimOverflow,
    IncompleteDecomposition,
    IndexOutOfRange,
    NotCentral,
    NotNormal,
    SymframesError,
    TheoremViolation,
)
from .groups import FiniteAbelianRep, charge_decomposition, charge_observable, shift_representation
from .linalg import DEFAULT_TOL, Tolerance
from .symmetry import SymmetryKind, is_symmetric, strong_twirl, weak_twirl

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "DegenerateDraw",
    "DimMismatch",
    "DimOverflow",
    "FiniteAbelianRep",
    "IncompleteDecomposition",
    "IndexOutOfRange",
    "NotCentral",
    "NotNormal",
    "StarAlgebra",
    "SymframesError",
    "SymmetryKind",
    "TheoremViolation",
    "Tolerance",
    "block_decomposition",
    "center",
    "charge_decomposition",
    "charge_observable",
    "commutant",
    "contains",
    "is_symmetric",
    "join",
    "shift_representation",
    "span_closure",
    "strong_twirl",
    "weak_twirl",
]
