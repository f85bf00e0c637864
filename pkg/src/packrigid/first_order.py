"""Infinitesimal rigidity decisions via the stress / proper-flex duality.

A packing is infinitesimally rigid iff (a) it is infinitesimally rigid with
the constrained radii pinned (kernel of the extended matrix is only the
trivial motions) and (b) an equilibrium stress exists whose radial force
sums are strictly positive on the shrink-only disks, strictly negative on
the grow-only disks and zero on the free disks.  The flex search is the
primal side of the same alternative; the two must never disagree.

LP outputs are never trusted raw: every returned stress or flex is
re-verified by direct evaluation before it reaches the caller.
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
)
from .lp import LinearProgram, LpStatus, solve
from .rigidity import (
    FlexSpaceReport,
    build_rigidity_matrix,
    extra_kernel_flexes,
    flex_space_report,
    project_out_trivial,
    radius_part,
    trivial_dim,
    trivial_space_orthonormal,
)


@dataclass(frozen=True)
class Stress:
    """Per-edge stress with its derived force data.

    ``net_forces[i]`` is the vector sum of omega_ij (p_i - p_j) over the
    edges at vertex i+1; ``radial_sums[i]`` is sum of omega_ij (r_i + r_j).
    """

    values: np.ndarray            # one per graph edge, in edge order
    net_forces: np.ndarray        # (n, 2)
    radial_sums: np.ndarray       # (n,)
    equilibrium_residual: float   # largest |net force| relative to force scale

    @classmethod
    def from_values(cls, graph: PlanarEmbeddedGraph, packing: Packing,
                    values) -> "Stress":
        values = np.asarray(values, dtype=float)
        if values.shape != (graph.m,):
            raise PackingError("stress needs one value per edge")
        forces = np.zeros((graph.n, 2))
        radial = np.zeros(graph.n)
        scale = 1e-300
        for k, (i, j) in enumerate(graph.edges):
            d = packing.centers[i - 1] - packing.centers[j - 1]
            f = values[k] * d
            forces[i - 1] += f
            forces[j - 1] -= f
            rr = packing.radii[i - 1] + packing.radii[j - 1]
            radial[i - 1] += values[k] * rr
            radial[j - 1] += values[k] * rr
            scale = max(scale, abs(values[k]) * float(np.hypot(d[0], d[1])))
        resid = float(np.max(np.hypot(forces[:, 0], forces[:, 1]))) / max(scale, 1e-300)
        return cls(values, forces, radial, resid)

    def radial_sum(self, v: int) -> float:
        return float(self.radial_sums[v - 1])

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.values) <= tol))


@dataclass(frozen=True)
class RigidityVerdict:
    """Outcome of the infinitesimal rigidity test.

    ``rigid`` is None when the stress LP margin falls in the indeterminate
    band [tol_lp/10, tol_lp], where neither side of the alternative is
    certified.  An infinitesimally rigid packing is also rigid (every proper
    motion path is a congruence), so rigid=True certifies rigidity outright.
    """

    rigid: bool | None
    fixed_radius_ok: bool
    stress: Stress | None
    counterexample_flex: np.ndarray | None
    diagnostics: FlexSpaceReport
    stress_margin: float
    note: str = ""

    @property
    def indeterminate(self) -> bool:
        return self.rigid is None


@dataclass(frozen=True)
class EdgeGapEntry:
    edge: tuple[int, int]
    stress_value: float
    gap_rate: float      # half the derivative of |p_i-p_j|^2 - (r_i+r_j)^2
    consistent: bool


@dataclass(frozen=True)
class TangencyReport:
    vacuous: bool
    precondition_violations: list[str]
    edges: list[EdgeGapEntry]
    radius_violations: list[str]

    @property
    def consistent(self) -> bool:
        return not self.precondition_violations and not self.radius_violations \
            and all(e.consistent for e in self.edges)


def _normalized(packing: Packing) -> tuple[Packing, float]:
    s = 1.0 / float(np.mean(packing.radii))
    return packing.scaled(s), s


def _radial_row_weights(graph: PlanarEmbeddedGraph, packing: Packing) -> np.ndarray:
    w = np.zeros(graph.n)
    for i, j in graph.edges:
        rr = packing.radii[i - 1] + packing.radii[j - 1]
        w[i - 1] += rr
        w[j - 1] += rr
    return w


def _stress_lp(graph: PlanarEmbeddedGraph, packing: Packing,
               partition: ConstraintPartition, tol: AnalysisTolerances):
    """Maximize the relative sign margin t of the radial sums.

    Variables are the edge stresses (boxed to [-1, 1]) plus t; equilibrium
    at every vertex and zero radial sum on free disks are equalities.
    Returns (margin, stress values).
    """
    pk, _ = _normalized(packing)
    m, n = graph.m, graph.n
    nv = m + 1
    t_col = m
    eq_rows, eq_rhs = [], []
    for v in range(1, n + 1):
        rx = np.zeros(nv)
        ry = np.zeros(nv)
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
        row = np.zeros(nv)
        for k, (i, j) in enumerate(graph.edges):
            if v in (i, j):
                row[k] = (pk.radii[i - 1] + pk.radii[j - 1]) / weights[v - 1]
        return row

    ub_rows, ub_rhs = [], []
    for v in partition.decrease:          # radial sum >= t
        row = -radial_row(v)
        row[t_col] = 1.0
        ub_rows.append(row)
        ub_rhs.append(0.0)
    for v in partition.increase:          # radial sum <= -t
        row = radial_row(v)
        row[t_col] = 1.0
        ub_rows.append(row)
        ub_rhs.append(0.0)
    for v in partition.free:
        eq_rows.append(radial_row(v))
        eq_rhs.append(0.0)

    c = np.zeros(nv)
    c[t_col] = 1.0
    bounds = [(-1.0, 1.0)] * m + [(0.0, 2.0)]
    lp = LinearProgram(c, np.asarray(eq_rows), np.asarray(eq_rhs),
                       np.asarray(ub_rows) if ub_rows else None,
                       np.asarray(ub_rhs) if ub_rhs else None, bounds)
    out = solve(lp, tol.tol_lp)
    if out.status is not LpStatus.OPTIMAL:
        return 0.0, None
    return float(out.objective_value), out.point[:m]


def verify_rigidifying_stress(graph: PlanarEmbeddedGraph, packing: Packing,
                              partition: ConstraintPartition, stress: Stress,
                              tol: AnalysisTolerances) -> float:
    """Direct evaluation of the sign conditions; returns the relative margin
    (negative or zero when some condition fails)."""
    if stress.equilibrium_residual > tol.tol_lp:
        return -np.inf
    weights = _radial_row_weights(graph, packing)
    margin = np.inf
    for v in partition.decrease:
        margin = min(margin, stress.radial_sum(v) / weights[v - 1])
    for v in partition.increase:
        margin = min(margin, -stress.radial_sum(v) / weights[v - 1])
    for v in partition.free:
        if abs(stress.radial_sum(v)) / weights[v - 1] > tol.tol_lp:
            return -np.inf
    if margin is np.inf:
        margin = 0.0
    return float(margin)


def fixed_radius_condition(graph: PlanarEmbeddedGraph, packing: Packing,
                           partition: ConstraintPartition,
                           tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> bool:
    """True iff pinning the constrained radii leaves only trivial motions."""
    report = flex_space_report(graph, packing, partition, tol)
    return report.dim_kernel_Re == trivial_dim(graph.n)


def find_rigidifying_stress(graph: PlanarEmbeddedGraph, packing: Packing,
                            partition: ConstraintPartition,
                            tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> Stress | None:
    """The dual certificate of infinitesimal rigidity: an equilibrium stress
    with strictly signed radial sums (positive on shrink-only disks,
    negative on grow-only, zero on free).  None when the LP margin is not
    strictly positive, and None when no disk carries a sign constraint (the
    condition is then vacuous and only the zero stress qualifies)."""
    if not (partition.increase or partition.decrease):
        return None
    margin, values = _stress_lp(graph, packing, partition, tol)
    if values is None or margin <= tol.tol_lp:
        return None
    stress = Stress.from_values(graph, packing, values)
    if verify_rigidifying_stress(graph, packing, partition, stress, tol) <= tol.tol_lp / 2:
        return None
    return stress


def _flex_sign_violation(partition: ConstraintPartition, flex: np.ndarray,
                         slack: float) -> bool:
    r = radius_part(flex)
    for v in partition.increase:
        if r[v - 1] < -slack:
            return True
    for v in partition.decrease:
        if r[v - 1] > slack:
            return True
    for v in partition.fixed:
        if abs(r[v - 1]) > slack:
            return True
    return False


def _canonical_sign(flex: np.ndarray) -> np.ndarray:
    # orient so that the lowest-indexed disk among the strongest radius
    # movers grows (ties between equal-magnitude movers break by vertex id)
    r = radius_part(flex)
    peak = float(np.max(np.abs(r)))
    if peak > 1e-12:
        idx = int(np.nonzero(np.abs(r) >= 0.5 * peak)[0][0])
        pivot = r[idx]
    else:
        pivot = flex[int(np.argmax(np.abs(flex)))]
    return -flex if pivot < 0 else flex


def find_proper_nontrivial_flex(graph: PlanarEmbeddedGraph, packing: Packing,
                                partition: ConstraintPartition,
                                tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> np.ndarray | None:
    """A unit-norm proper infinitesimal flex orthogonal to the trivial
    motions, or None when only trivial motions are proper.

    Flexes that keep every constrained radius fixed live in the kernel of
    the extended matrix and are found there; flexes that strictly move a
    constrained radius are found by maximizing the signed radius objective
    over the flex polytope.
    """
    pk, _ = _normalized(packing)
    extra = extra_kernel_flexes(graph, pk, partition, tol)
    if extra.shape[0] > 0:
        flex = _canonical_sign(extra[0])
        return flex / float(np.linalg.norm(flex))
    return find_strict_mover_flex(graph, packing, partition, tol)


def find_strict_mover_flex(graph: PlanarEmbeddedGraph, packing: Packing,
                           partition: ConstraintPartition,
                           tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> np.ndarray | None:
    """A unit proper flex that strictly moves some sign-constrained radius,
    or None; found by maximizing the total admitted radius movement."""
    pk, _ = _normalized(packing)
    R = build_rigidity_matrix(graph, pk, tol, check=False).matrix
    n = graph.n
    nv = 3 * n
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
    obj = np.zeros(nv)
    for v in partition.increase:
        row = np.zeros(nv)
        row[3 * (v - 1) + 2] = -1.0   # r' >= 0
        ub_rows.append(row)
        ub_rhs.append(0.0)
        obj[3 * (v - 1) + 2] = 1.0
    for v in partition.decrease:
        row = np.zeros(nv)
        row[3 * (v - 1) + 2] = 1.0    # r' <= 0
        ub_rows.append(row)
        ub_rhs.append(0.0)
        obj[3 * (v - 1) + 2] = -1.0
    if not np.any(obj):
        return None                    # no inequality-constrained radii to move
    lp = LinearProgram(obj, np.asarray(eq_rows), np.asarray(eq_rhs),
                       np.asarray(ub_rows) if ub_rows else None,
                       np.asarray(ub_rhs) if ub_rhs else None,
                       [(-1.0, 1.0)] * nv)
    out = solve(lp, tol.tol_lp)
    if out.status is not LpStatus.OPTIMAL or out.objective_value <= tol.tol_lp:
        return None
    flex = project_out_trivial(out.point, pk)
    norm = float(np.linalg.norm(flex))
    if norm < tol.tol_strict:
        return None
    # keep the LP's orientation: the opposite direction is improper here
    flex = flex / norm
    # never trust the LP raw
    Rres = float(np.max(np.abs(R @ flex))) if R.size else 0.0
    scale = float(np.max(np.abs(R))) if R.size else 1.0
    if Rres > 100 * tol.tol_rank * max(scale, 1.0):
        return None
    if _flex_sign_violation(partition, flex, tol.tol_strict / 10):
        return None
    return flex


def is_infinitesimally_rigid(graph: PlanarEmbeddedGraph, packing: Packing,
                             partition: ConstraintPartition,
                             tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> RigidityVerdict:
    """Decide infinitesimal rigidity, carrying either a verified stress
    certificate or a verified counterexample flex."""
    if len(partition.tags) != graph.n:
        raise PackingError("partition size does not match the graph")
    diag = flex_space_report(graph, packing, partition, tol)
    fr_ok = diag.dim_kernel_Re == trivial_dim(graph.n)
    if not (partition.increase or partition.decrease):
        # no sign-constrained disks: the stress condition is vacuous (the
        # zero stress has zero radial sums everywhere), rigidity reduces to
        # the fixed-radius condition
        if fr_ok:
            zero = Stress.from_values(graph, packing, np.zeros(graph.m))
            return RigidityVerdict(True, True, zero, None, diag, float("inf"),
                                   note="stress condition vacuous: no sign-constrained disks")
        flex = find_proper_nontrivial_flex(graph, packing, partition, tol)
        return RigidityVerdict(False, False, None, flex, diag, 0.0,
                               note="extended matrix kernel exceeds the trivial motions")
    margin, values = _stress_lp(graph, packing, partition, tol)
    if not fr_ok:
        flex = find_proper_nontrivial_flex(graph, packing, partition, tol)
        return RigidityVerdict(False, fr_ok, None, flex, diag, margin,
                               note="extended matrix kernel exceeds the trivial motions")
    if values is not None and margin > tol.tol_lp:
        stress = Stress.from_values(graph, packing, values)
        direct = verify_rigidifying_stress(graph, packing, partition, stress, tol)
        if direct > tol.tol_lp / 2:
            return RigidityVerdict(True, True, stress, None, diag, margin)
        return RigidityVerdict(None, True, None, None, diag, margin,
                               note="stress failed direct re-verification")
    if margin >= tol.tol_lp / 10:
        return RigidityVerdict(None, True, None, None, diag, margin,
                               note="stress margin in the indeterminate band")
    flex = find_proper_nontrivial_flex(graph, packing, partition, tol)
    if flex is None:
        return RigidityVerdict(None, True, None, None, diag, margin,
                               note="no stress and no flex found; dual tests disagree")
    return RigidityVerdict(False, True, None, flex, diag, margin,
                           note="proper flex strictly moves a constrained radius")


def corollary_tangency_report(stress: Stress, flex: np.ndarray,
                              graph: PlanarEmbeddedGraph, packing: Packing,
                              tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> TangencyReport:
    """Check the relaxed-flex consequences of a rigidifying stress.

    For a motion allowed to separate negatively stressed edges and overlap
    positively stressed ones (while moving radii only in their admitted
    directions), every stressed edge must in fact stay tangent to first
    order and every constrained radius must be stationary.  Input flexes
    violating the one-sided conditions are reported as precondition
    violations; a zero stress yields a vacuous report.
    """
    if stress.is_zero(1e-300):
        return TangencyReport(True, [], [], [])
    # the stress must be a genuine dual certificate for some partition; the
    # caller's partition is implicit in the radial sign pattern
    if stress.equilibrium_residual > tol.tol_lp:
        raise PackingError("stress is not in equilibrium")
    R = build_rigidity_matrix(graph, packing, tol, check=False)
    rates = R.matrix @ np.asarray(flex, dtype=float)
    scale = max(float(np.max(np.abs(R.matrix))), 1.0)
    slack = tol.tol_lp * scale * 10
    pre = []
    entries = []
    for k, (i, j) in enumerate(graph.edges):
        w = float(stress.values[k])
        rate = float(rates[k])
        if w < -tol.tol_lp and rate < -slack:
            pre.append(f"edge ({i},{j}) with negative stress overlaps (rate {rate:.3e})")
        if w > tol.tol_lp and rate > slack:
            pre.append(f"edge ({i},{j}) with positive stress separates (rate {rate:.3e})")
    weights = _radial_row_weights(graph, packing)
    r = radius_part(np.asarray(flex))
    radius_bad = []
    for v in range(1, graph.n + 1):
        s = stress.radial_sum(v) / weights[v - 1]
        if s > tol.tol_lp and r[v - 1] > slack:
            pre.append(f"disk {v} grows against its admitted direction")
        if s < -tol.tol_lp and r[v - 1] < -slack:
            pre.append(f"disk {v} shrinks against its admitted direction")
    if pre:
        return TangencyReport(False, pre, [], [])
    for k, (i, j) in enumerate(graph.edges):
        w = float(stress.values[k])
        if abs(w) <= tol.tol_lp:
            continue
        rate = float(rates[k])
        entries.append(EdgeGapEntry((i, j), w, rate, abs(rate) <= slack))
    for v in range(1, graph.n + 1):
        s = stress.radial_sum(v) / weights[v - 1]
        if abs(s) > tol.tol_lp and abs(r[v - 1]) > slack:
            radius_bad.append(f"constrained disk {v} changes radius at rate {r[v - 1]:.3e}")
    return TangencyReport(False, [], entries, radius_bad)
