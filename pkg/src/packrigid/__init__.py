"""Rigidity analysis of tangency circle packings with sign-constrained radii."""

from .core import (
    AnalysisTolerances,
    BoundaryVertexError,
    ConstraintPartition,
    DEFAULT_TOLERANCES,
    Packing,
    PackingError,
    PlanarEmbeddedGraph,
    Tag,
    angle_sum,
    tangency_residual,
    triangle_angle,
    validate_packing,
)
from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [
    "AnalysisTolerances",
    "BoundaryVertexError",
    "ConstraintPartition",
    "DEFAULT_TOLERANCES",
    "KERNEL_BACKEND",
    "Packing",
    "PackingError",
    "PlanarEmbeddedGraph",
    "Tag",
    "angle_sum",
    "tangency_residual",
    "triangle_angle",
    "validate_packing",
]
