"""Exact rational linear algebra and polyhedral queries."""

from .linalg import AffineForm, Vector, rank, rref, to_fraction, vector
from .polyhedron import (
    Flat,
    Polyhedron,
    affine_hull,
    coordinate_bounds,
    dim,
    dim_intersection,
    feasible_point,
    implicit_equalities,
    is_bounded,
    lp_feasible,
    maximize,
    project,
    projection_dim,
    recession_cone,
    recession_direction,
    recession_direction_exists,
)
from .simplex import LPResult

__all__ = [
    "AffineForm", "Flat", "LPResult", "Polyhedron", "Vector",
    "affine_hull", "coordinate_bounds", "dim", "dim_intersection",
    "feasible_point", "implicit_equalities", "is_bounded", "lp_feasible",
    "maximize", "project", "projection_dim", "rank", "recession_cone",
    "recession_direction", "recession_direction_exists", "rref",
    "to_fraction", "vector",
]
