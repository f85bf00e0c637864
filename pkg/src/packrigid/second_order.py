"""Second-order analysis: flex extendability, blocking stresses, prestress
stability.

For a proper first-order flex p', disks that already strictly changed their
radius drop out of the sign constraints at second order (their refined class
is free).  p' extends iff the inhomogeneous system R(p) p'' = rhs(p') admits
a solution whose radii respect the refined signs; the exact alternative is
an equilibrium stress, non-strictly signed on the refined partition, whose
pairing with rhs(p') is strictly negative.  Exactly one side exists.
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
    Tag,
)
from .first_order import (
    Stress,
    _normalized,
    _radial_row_weights,
    find_strict_mover_flex,
)
from .lp import LinearProgram, LpStatus, solve
from .rigidity import (
    build_rigidity_matrix,
    extra_kernel_flexes,
    radius_part,
    trivial_space_orthonormal,
)


@dataclass(frozen=True)
class RefinedPartition:
    """Second-order constraint classes along a given flex."""

    tags: tuple[Tag, ...]
    moved: tuple[int, ...]            # vertices released to FREE
    near_threshold: tuple[int, ...]   # |r'| within a decade of tol_strict

    def as_partition(self) -> ConstraintPartition:
        return ConstraintPartition(self.tags)


@dataclass(frozen=True)
class SecondOrderVerdict:
    flex: np.ndarray
    refined: RefinedPartition
    extendable: bool
    extension: np.ndarray | None
    blocking_stress: Stress | None
    blocking_value: float             # pairing of the stress with the flex defect
    exclusive: bool                   # exactly one of extension/stress present


@dataclass(frozen=True)
class SecondOrderAnalysis:
    """Per-direction verdicts plus the overall classification.

    status is one of "first_order_rigid" (no nontrivial proper flexes),
    "prestress_stable" (every analyzed direction blocked; implies rigid),
    "not_second_order_rigid" (some analyzed direction extends) or
    "inconclusive" (flex cone not a line or ray; verdicts cover a basis).
    """

    status: str
    verdicts: tuple[SecondOrderVerdict, ...]
    flex_cone_dim: int                # 0, 1, or 2 meaning "more than a line"

    @property
    def prestress_stable(self) -> bool:
        return self.status in ("first_order_rigid", "prestress_stable")


def refine_partition(partition: ConstraintPartition, flex: np.ndarray,
                     tol_strict: float = 1e-6) -> RefinedPartition:
    """Release sign-constrained disks whose radius strictly moves along the
    flex; FIXED and FREE tags never change.  Idempotent."""
    r = radius_part(np.asarray(flex, dtype=float))
    if r.shape[0] != len(partition.tags):
        raise PackingError("flex length does not match the partition")
    tags = list(partition.tags)
    moved = []
    near = []
    for v in range(1, len(tags) + 1):
        mag = abs(r[v - 1])
        if tags[v - 1] in (Tag.INCREASE, Tag.DECREASE):
            if mag > tol_strict:
                tags[v - 1] = Tag.FREE
                moved.append(v)
            if tol_strict / 10 <= mag <= tol_strict * 10:
                near.append(v)
    return RefinedPartition(tuple(tags), tuple(moved), tuple(near))


def extension_rhs(graph: PlanarEmbeddedGraph, packing: Packing,
                  flex: np.ndarray) -> np.ndarray:
    """Per-edge target for the second-order system R(p) p'' = rhs:
    (r'_i + r'_j)^2 - |p'_i - p'_j|^2."""
    flex = np.asarray(flex, dtype=float)
    out = np.zeros(graph.m)
    for k, (i, j) in enumerate(graph.edges):
        dx = flex[3 * (i - 1)] - flex[3 * (j - 1)]
        dy = flex[3 * (i - 1) + 1] - flex[3 * (j - 1) + 1]
        dr = flex[3 * (i - 1) + 2] + flex[3 * (j - 1) + 2]
        out[k] = dr * dr - (dx * dx + dy * dy)
    return out


def is_extendable(graph: PlanarEmbeddedGraph, packing: Packing,
                  partition: ConstraintPartition, flex: np.ndarray,
                  tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> np.ndarray | None:
    """A second-order vector p'' making (p', p'') proper, or None.

    Solves the feasibility problem R(p) p'' = rhs with r'' >= 0 / <= 0 / = 0
    on the refined classes; the returned vector is re-verified directly.
    """
    pk, scale = _normalized(packing)
    flex = np.asarray(flex, dtype=float)
    refined = refine_partition(partition, flex, tol.tol_strict)
    # rhs scales like the squared flex under packing normalization of R
    R = build_rigidity_matrix(graph, pk, tol, check=False).matrix
    rhs = extension_rhs(graph, pk, flex)
    nv = 3 * graph.n
    eq_rows = [R[k] for k in range(R.shape[0])]
    eq_rhs = list(rhs)
    ub_rows, ub_rhs = [], []
    for v in range(1, graph.n + 1):
        t = refined.tags[v - 1]
        if t is Tag.FREE:
            continue
        row = np.zeros(nv)
        row[3 * (v - 1) + 2] = 1.0
        if t is Tag.FIXED:
            eq_rows.append(row)
            eq_rhs.append(0.0)
        elif t is Tag.INCREASE:
            ub_rows.append(-row)
            ub_rhs.append(0.0)
        else:
            ub_rows.append(row)
            ub_rhs.append(0.0)
    lp = LinearProgram(np.zeros(nv), np.asarray(eq_rows), np.asarray(eq_rhs),
                       np.asarray(ub_rows) if ub_rows else None,
                       np.asarray(ub_rhs) if ub_rhs else None)
    out = solve(lp, tol.tol_lp)
    if out.status is not LpStatus.OPTIMAL:
        return None
    p2 = out.point
    resid = float(np.max(np.abs(R @ p2 - rhs)))
    if resid > np.sqrt(tol.tol_lp) * max(1.0, float(np.max(np.abs(rhs)))):
        return None
    r2 = radius_part(p2)
    slack = tol.tol_lp * max(1.0, float(np.max(np.abs(p2))))
    for v in refined.as_partition().increase:
        if r2[v - 1] < -slack:
            return None
    for v in refined.as_partition().decrease:
        if r2[v - 1] > slack:
            return None
    for v in refined.as_partition().fixed:
        if abs(r2[v - 1]) > slack:
            return None
    # map back to the original packing's scale: the rows of R scale linearly
    # with the packing while the flex defect does not
    return p2 * scale


def find_blocking_stress(graph: PlanarEmbeddedGraph, packing: Packing,
                         partition: ConstraintPartition, flex: np.ndarray,
                         tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> Stress | None:
    """An equilibrium stress certifying that the flex does not extend.

    Radial sums must be >= 0 on the refined shrink-only disks, <= 0 on the
    refined grow-only disks and 0 on the refined free disks, and the pairing
    sum of omega_ij (|p'_i - p'_j|^2 - (r'_i + r'_j)^2) must be strictly
    positive.  The LP maximizes that pairing with |omega| <= 1.
    """
    pk, _ = _normalized(packing)
    flex = np.asarray(flex, dtype=float)
    refined = refine_partition(partition, flex, tol.tol_strict).as_partition()
    m, n = graph.m, graph.n
    eq_rows, eq_rhs = [], []
    for v in range(1, n + 1):
        rx = np.zeros(m)
        ry = np.zeros(m)
        for k, (i, j) in enumerate(graph.edges):
            if v == i:
                d = pk.centers[i - 1] - pk.centers[j - 1]
            elif v == j:
                d = pk.centers[j - 1] - pk.centers[i - 1]
            else:
                continue
            rx[k] = d[0]
            ry[k] = d[1]
        eq_rows.extend([rx, ry])
        eq_rhs.extend([0.0, 0.0])
    weights = _radial_row_weights(graph, pk)

    def radial_row(v):
        row = np.zeros(m)
        for k, (i, j) in enumerate(graph.edges):
            if v in (i, j):
                row[k] = (pk.radii[i - 1] + pk.radii[j - 1]) / weights[v - 1]
        return row

    ub_rows, ub_rhs = [], []
    for v in refined.free:
        eq_rows.append(radial_row(v))
        eq_rhs.append(0.0)
    for v in refined.decrease:
        ub_rows.append(-radial_row(v))
        ub_rhs.append(0.0)
    for v in refined.increase:
        ub_rows.append(radial_row(v))
        ub_rhs.append(0.0)
    objective = -extension_rhs(graph, pk, flex)
    lp = LinearProgram(objective, np.asarray(eq_rows), np.asarray(eq_rhs),
                       np.asarray(ub_rows) if ub_rows else None,
                       np.asarray(ub_rhs) if ub_rhs else None,
                       [(-1.0, 1.0)] * m)
    out = solve(lp, tol.tol_lp)
    if out.status is not LpStatus.OPTIMAL or out.objective_value <= tol.tol_lp:
        return None
    stress = Stress.from_values(graph, packing, out.point)
    if verify_blocking_stress(graph, packing, partition, flex, stress, tol) <= tol.tol_lp / 2:
        return None
    return stress


def verify_blocking_stress(graph: PlanarEmbeddedGraph, packing: Packing,
                           partition: ConstraintPartition, flex: np.ndarray,
                           stress: Stress, tol: AnalysisTolerances) -> float:
    """Direct re-check of a claimed blocking stress; returns the pairing
    value (the contradiction margin), or -inf when a side condition fails.

    Any admissible p'' pairs to zero against an equilibrium stress whose
    radial sums vanish on the refined free disks, while a valid extension
    would have to pair to the strictly negative -value; that contradiction
    is exactly the blocking argument.
    """
    if stress.equilibrium_residual > tol.tol_lp:
        return -np.inf
    refined = refine_partition(partition, flex, tol.tol_strict).as_partition()
    weights = _radial_row_weights(graph, packing)
    for v in refined.free:
        if abs(stress.radial_sum(v)) / weights[v - 1] > tol.tol_lp:
            return -np.inf
    for v in refined.decrease:
        if stress.radial_sum(v) / weights[v - 1] < -tol.tol_lp:
            return -np.inf
    for v in refined.increase:
        if stress.radial_sum(v) / weights[v - 1] > tol.tol_lp:
            return -np.inf
    pairing = -float(extension_rhs(graph, packing, np.asarray(flex)) @ stress.values)
    return pairing


def analyze_direction(graph: PlanarEmbeddedGraph, packing: Packing,
                      partition: ConstraintPartition, flex: np.ndarray,
                      tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> SecondOrderVerdict:
    """Extendability and blocking for one proper flex direction; the two
    outcomes must be mutually exclusive."""
    refined = refine_partition(partition, flex, tol.tol_strict)
    extension = is_extendable(graph, packing, partition, flex, tol)
    stress = find_blocking_stress(graph, packing, partition, flex, tol)
    value = 0.0
    if stress is not None:
        value = verify_blocking_stress(graph, packing, partition, flex, stress, tol)
    exclusive = (extension is None) != (stress is None)
    return SecondOrderVerdict(np.asarray(flex, dtype=float), refined,
                              extension is not None, extension, stress,
                              value, exclusive)


def _proper_direction(partition: ConstraintPartition, flex: np.ndarray,
                      slack: float) -> bool:
    r = radius_part(flex)
    for v in partition.increase:
        if r[v - 1] < -slack:
            return False
    for v in partition.decrease:
        if r[v - 1] > slack:
            return False
    for v in partition.fixed:
        if abs(r[v - 1]) > slack:
            return False
    return True


def _cone_is_ray(graph: PlanarEmbeddedGraph, pk: Packing,
                 partition: ConstraintPartition, f_hat: np.ndarray,
                 tol: AnalysisTolerances) -> bool:
    """True when every proper flex orthogonal to the trivial motions is a
    nonnegative multiple of f_hat, tested by maximizing each coordinate of
    the component orthogonal to f_hat over the boxed flex cone."""
    R = build_rigidity_matrix(graph, pk, tol, check=False).matrix
    nv = 3 * graph.n
    eq_rows = [R[k] for k in range(R.shape[0])]
    eq_rhs = [0.0] * R.shape[0]
    for v in partition.fixed:
        row = np.zeros(nv)
        row[3 * (v - 1) + 2] = 1.0
        eq_rows.append(row)
        eq_rhs.append(0.0)
    for tv in trivial_space_orthonormal(pk):
        eq_rows.append(tv)
        eq_rhs.append(0.0)
    ub_rows, ub_rhs = [], []
    for v in partition.increase:
        row = np.zeros(nv)
        row[3 * (v - 1) + 2] = -1.0
        ub_rows.append(row)
        ub_rhs.append(0.0)
    for v in partition.decrease:
        row = np.zeros(nv)
        row[3 * (v - 1) + 2] = 1.0
        ub_rows.append(row)
        ub_rhs.append(0.0)
    proj = np.eye(nv) - np.outer(f_hat, f_hat)
    threshold = 100 * tol.tol_lp
    for k in range(nv):
        for sign in (1.0, -1.0):
            lp = LinearProgram(sign * proj[k],
                               np.asarray(eq_rows), np.asarray(eq_rhs),
                               np.asarray(ub_rows) if ub_rows else None,
                               np.asarray(ub_rhs) if ub_rhs else None,
                               [(-1.0, 1.0)] * nv)
            out = solve(lp, tol.tol_lp)
            if out.status is not LpStatus.OPTIMAL or out.objective_value > threshold:
                return False
    return True


def second_order_analysis(graph: PlanarEmbeddedGraph, packing: Packing,
                          partition: ConstraintPartition,
                          tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> SecondOrderAnalysis:
    """Classify the nontrivial proper flex directions and test each for
    blocking.

    When the flexes form a line (or a single ray) modulo trivial motions,
    both signed directions that are proper get verdicts and prestress
    stability is declared iff all of them are blocked.  Higher-dimensional
    cones are reported as inconclusive with verdicts for a spanning set.
    """
    pk, _ = _normalized(packing)
    extra = extra_kernel_flexes(graph, pk, partition, tol)
    d_lin = extra.shape[0]
    mover = find_strict_mover_flex(graph, packing, partition, tol)

    directions: list[np.ndarray] = []
    cone_dim: int
    if d_lin == 0 and mover is None:
        return SecondOrderAnalysis("first_order_rigid", (), 0)
    if d_lin == 1 and mover is None:
        g = extra[0] / np.linalg.norm(extra[0])
        directions = [g, -g]
        cone_dim = 1
    elif d_lin == 0 and mover is not None and _cone_is_ray(graph, pk, partition, mover, tol):
        directions = [mover]
        if _proper_direction(partition, -mover, tol.tol_strict / 10):
            directions.append(-mover)
        cone_dim = 1
    else:
        cone_dim = 2
        directions = []
        for row in extra:
            g = row / np.linalg.norm(row)
            directions.extend([g, -g])
        if mover is not None:
            directions.append(mover)

    verdicts = tuple(analyze_direction(graph, packing, partition, d, tol)
                     for d in directions)
    if cone_dim >= 2:
        return SecondOrderAnalysis("inconclusive", verdicts, cone_dim)
    if all(v.blocking_stress is not None and not v.extendable for v in verdicts):
        return SecondOrderAnalysis("prestress_stable", verdicts, cone_dim)
    return SecondOrderAnalysis("not_second_order_rigid", verdicts, cone_dim)
