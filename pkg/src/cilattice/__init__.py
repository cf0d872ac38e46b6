"""Primitive middle cohomology lattices of even-dimensional complete intersections."""

from .decompose import (
    Branch,
    DecompositionReport,
    OutsideTheorem,
    decompose,
    parity_class,
    signature_data,
    wall_witness,
)
from .hodge import MultiDegree, euler_oracle, hodge_row, series_multi, series_single
from .lattice import Decomposition, GramLattice
from .oracle import audit, definite_isometry

__all__ = [
    "Branch",
    "Decomposition",
    "DecompositionReport",
    "GramLattice",
    "MultiDegree",
    "OutsideTheorem",
    "audit",
    "decompose",
    "definite_isometry",
    "euler_oracle",
    "hodge_row",
    "parity_class",
    "series_multi",
    "series_single",
    "signature_data",
    "wall_witness",
]
