"""Rigidity matrices of a packing and the dimension counts of its flex spaces.

Row order follows ``graph.edges``; columns are (x_1, y_1, r_1, ..., x_n,
y_n, r_n).  The extended matrix stacks unit radius-fixing rows for the
constrained vertices below the edge rows, in the block order V-, V+, V=.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    AnalysisTolerances,
    DEFAULT_TOLERANCES,
    ConstraintPartition,
    Packing,
    PackingError,
    PlanarEmbeddedGraph,
    validate_packing,
)
from .linalg import kernel_basis, rank_report


@dataclass(frozen=True)
class RigidityMatrix:
    matrix: np.ndarray
    row_index: tuple[tuple[int, int], ...]           # edge per row
    col_index: tuple[tuple[int, str], ...]           # (vertex, "x"|"y"|"r") per column


@dataclass(frozen=True)
class ExtendedRigidityMatrix:
    matrix: np.ndarray
    row_index: tuple                                  # edges, then ("fix", v)
    fixing_order: tuple[int, ...]                     # vertex per fixing row


@dataclass(frozen=True)
class FlexSpaceReport:
    dim_kernel_R: int
    dim_kernel_Re: int
    dim_kernel_Rprime: int
    nontrivial_fixed_radii_flexes: int   # flexes moving centers only, beyond trivial
    free_disk_flexes: int                # flexes altering only free-disk radii
    near_degenerate: bool
    singular_values_Re: np.ndarray


def column_index(n: int) -> tuple[tuple[int, str], ...]:
    return tuple((v, c) for v in range(1, n + 1) for c in ("x", "y", "r"))


def build_rigidity_matrix(graph: PlanarEmbeddedGraph, packing: Packing,
                          tol: AnalysisTolerances = DEFAULT_TOLERANCES,
                          check: bool = True) -> RigidityMatrix:
    """One row per edge (i, j): x_i - x_j, y_i - y_j and -(r_i + r_j) at i,
    mirrored at j; kernel vectors are exactly the infinitesimal flexes."""
    if check:
        violations = validate_packing(graph, packing, tol)
        if violations:
            raise PackingError(
                f"packing is invalid for this graph ({len(violations)} violation(s), "
                f"first: {violations[0].detail})")
    n = graph.n
    rows = np.zeros((graph.m, 3 * n))
    for k, (i, j) in enumerate(graph.edges):
        dx = packing.centers[i - 1] - packing.centers[j - 1]
        rr = packing.radii[i - 1] + packing.radii[j - 1]
        rows[k, 3 * (i - 1)] = dx[0]
        rows[k, 3 * (i - 1) + 1] = dx[1]
        rows[k, 3 * (i - 1) + 2] = -rr
        rows[k, 3 * (j - 1)] = -dx[0]
        rows[k, 3 * (j - 1) + 1] = -dx[1]
        rows[k, 3 * (j - 1) + 2] = -rr
    return RigidityMatrix(rows, graph.edges, column_index(n))


def build_fixing_rows(S, n: int) -> np.ndarray:
    """|S| unit rows, each with a single 1 in the radius column of one vertex."""
    S = tuple(S)
    rows = np.zeros((len(S), 3 * n))
    for k, v in enumerate(S):
        if not 1 <= v <= n:
            raise PackingError(f"vertex {v} out of range 1..{n}")
        rows[k, 3 * (v - 1) + 2] = 1.0
    return rows


def build_extended_matrix(graph: PlanarEmbeddedGraph, packing: Packing,
                          partition: ConstraintPartition,
                          tol: AnalysisTolerances = DEFAULT_TOLERANCES,
                          check: bool = True) -> ExtendedRigidityMatrix:
    """Stack [R; E_{V-}; E_{V+}; E_{V=}]."""
    if len(partition.tags) != graph.n:
        raise PackingError("partition size does not match the graph")
    R = build_rigidity_matrix(graph, packing, tol, check=check)
    order = partition.decrease + partition.increase + partition.fixed
    stacked = np.vstack([R.matrix, build_fixing_rows(order, graph.n)])
    row_index = tuple(R.row_index) + tuple(("fix", v) for v in order)
    return ExtendedRigidityMatrix(stacked, row_index, order)


def trivial_flex_basis(packing: Packing) -> list[np.ndarray]:
    """Derivatives of plane isometries: two translations and one rotation,
    all fixing every radius.  For a single disk the rotation is dependent on
    the translations, so only two vectors are returned."""
    n = packing.n
    tx = np.zeros(3 * n)
    tx[0::3] = 1.0
    ty = np.zeros(3 * n)
    ty[1::3] = 1.0
    if n == 1:
        return [tx, ty]
    rot = np.zeros(3 * n)
    rot[0::3] = -packing.centers[:, 1]
    rot[1::3] = packing.centers[:, 0]
    return [tx, ty, rot]


def trivial_space_orthonormal(packing: Packing) -> np.ndarray:
    """Orthonormal rows spanning the trivial flexes."""
    basis = np.asarray(trivial_flex_basis(packing))
    q, _ = np.linalg.qr(basis.T)
    return q.T[: len(basis)]


def project_out_trivial(vec: np.ndarray, packing: Packing) -> np.ndarray:
    q = trivial_space_orthonormal(packing)
    return vec - q.T @ (q @ vec)


def trivial_dim(n: int) -> int:
    return 2 if n == 1 else 3


def radius_part(vec: np.ndarray) -> np.ndarray:
    """The (r'_1, ..., r'_n) slice of a coordinate vector."""
    return np.asarray(vec)[2::3]


def flex_space_report(graph: PlanarEmbeddedGraph, packing: Packing,
                      partition: ConstraintPartition,
                      tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> FlexSpaceReport:
    """Kernel dimensions of R, R_e and R' = [R; E_V], and the two nontrivial
    flex counts derived from them: center-only flexes (kernel R' minus the
    trivial motions) and free-radius flexes (kernel R_e minus kernel R')."""
    R = build_rigidity_matrix(graph, packing, tol)
    Re = build_extended_matrix(graph, packing, partition, tol, check=False)
    Rprime = np.vstack([R.matrix,
                        build_fixing_rows(range(1, graph.n + 1), graph.n)])
    rep_R = rank_report(R.matrix, tol.tol_rank)
    rep_Re = rank_report(Re.matrix, tol.tol_rank)
    rep_Rp = rank_report(Rprime, tol.tol_rank)
    dim_R = 3 * graph.n - rep_R.rank
    dim_Re = 3 * graph.n - rep_Re.rank
    dim_Rp = 3 * graph.n - rep_Rp.rank
    t = trivial_dim(graph.n)
    return FlexSpaceReport(
        dim_kernel_R=dim_R,
        dim_kernel_Re=dim_Re,
        dim_kernel_Rprime=dim_Rp,
        nontrivial_fixed_radii_flexes=dim_Rp - t,
        free_disk_flexes=dim_Re - dim_Rp,
        near_degenerate=rep_Re.near_cutoff or rep_R.near_cutoff or rep_Rp.near_cutoff,
        singular_values_Re=rep_Re.singular_values,
    )


def extra_kernel_flexes(graph: PlanarEmbeddedGraph, packing: Packing,
                        partition: ConstraintPartition,
                        tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Orthonormal kernel vectors of R_e orthogonal to the trivial motions.

    These are exactly the proper flexes that keep every constrained radius
    fixed (center-only flexes and free-disk flexes); rows of the result.
    """
    Re = build_extended_matrix(graph, packing, partition, tol, check=False)
    kern = kernel_basis(Re.matrix, tol.tol_rank)
    if kern.shape[0] == 0:
        return kern
    q = trivial_space_orthonormal(packing)
    resid = kern - (kern @ q.T) @ q
    # re-orthonormalize the non-trivial component
    u, s, vt = np.linalg.svd(resid, full_matrices=False)
    keep = s > 1e-8
    return vt[: int(np.sum(keep))]
