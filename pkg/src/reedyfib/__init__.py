"""Finite computations with truncated simplicial, bisimplicial and trisimplicial sets.

Fibration checks (Kan, Reedy, left/right, Reedy left and their localized
variants), Grothendieck constructions over finite categories and the
oracles that certify weak equivalences.
"""

__version__ = "0.1.0"

from .verdict import FibrationReport, Status, Verdict, fails, holds, meet, unknown
from .presheaf import (
    Presheaf,
    PresheafMap,
    StructuralError,
    TruncationError,
    empty,
    identity_map,
    point,
    validate,
)
from .search import HomSearch, backend
from .shapes import ShapeError, build, default_trunc
from .category import FiniteCategory, indiscrete, nerve, ordinal
from .reindex import UnsupportedFunctor

__all__ = [
    "FibrationReport",
    "FiniteCategory",
    "HomSearch",
    "Presheaf",
    "PresheafMap",
    "ShapeError",
    "Status",
    "StructuralError",
    "TruncationError",
    "UnsupportedFunctor",
    "Verdict",
    "backend",
    "build",
    "default_trunc",
    "empty",
    "fails",
    "holds",
    "identity_map",
    "indiscrete",
    "meet",
    "nerve",
    "ordinal",
    "point",
    "unknown",
    "validate",
]
