"""Constraint solver registry."""

from __future__ import annotations

from ..errors import LoadError
from .base import ConstraintSolver, EntailOrder, ProjectedStore
from .differences import DiffSolver
from .herbrand import NullSolver
from .lattice import LatSolver, Lattice, parse_lattice_file, signs_lattice
from .rationals import RationalSolver

__all__ = [
    "ConstraintSolver", "EntailOrder", "ProjectedStore",
    "RationalSolver", "DiffSolver", "LatSolver", "NullSolver",
    "Lattice", "parse_lattice_file", "signs_lattice", "make_solver",
]


def make_solver(name: str, lattice: Lattice | None = None) -> ConstraintSolver:
    if name == "q":
        return RationalSolver()
    if name == "d":
        return DiffSolver()
    if name == "lat":
        return LatSolver(lattice)
    if name == "none":
        return NullSolver()
    raise LoadError(f"unknown solver {name!r} (expected q, d, lat or none)")
