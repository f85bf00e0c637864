"""Linear independence of radius sets and greedy minimum-cost rigidifying sets.

A set S of disks is independent when the fixing rows E_S are independent
over the row space of R(p), i.e. rank [R; E_S] = m + |S|.  Independent sets
form a matroid, so the greedy algorithm over any nonnegative cost function
returns a minimum-cost maximal independent set; when the bar framework is
infinitesimally rigid every maximal independent set has 3n - m - 3 disks
and fixing one as V= rigidifies the packing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    AnalysisTolerances,
    DEFAULT_TOLERANCES,
    Packing,
    PackingError,
    PlanarEmbeddedGraph,
)
from .linalg import numerical_rank
from .rigidity import build_fixing_rows, build_rigidity_matrix, trivial_dim


class BarFrameworkFlexibleError(PackingError):
    """Greedy precondition violated: the bar framework is not rigid."""


@dataclass(frozen=True)
class RadiusSet:
    vertices: tuple[int, ...]
    rank: int                       # rank of [R; E_S]


@dataclass(frozen=True)
class GreedyResult:
    radius_set: RadiusSet
    total_cost: float
    indeterminate_skipped: tuple[int, ...]


def _stacked(graph, packing, S, tol, check=True):
    R = build_rigidity_matrix(graph, packing, tol, check=check).matrix
    if not S:
        return R
    return np.vstack([R, build_fixing_rows(S, graph.n)])


def is_independent(graph: PlanarEmbeddedGraph, packing: Packing, S,
                   tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> bool:
    """True iff no radius in S is first-order determined by the others."""
    S = tuple(S)
    rank = numerical_rank(_stacked(graph, packing, S, tol), tol.tol_rank)
    return rank == graph.m + len(S)


def is_maximal(graph: PlanarEmbeddedGraph, packing: Packing, S,
               tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> bool:
    """True iff the radii in S determine every radius to first order."""
    S = tuple(S)
    rank_S = numerical_rank(_stacked(graph, packing, S, tol), tol.tol_rank)
    rank_V = numerical_rank(
        _stacked(graph, packing, range(1, graph.n + 1), tol, check=False), tol.tol_rank)
    return rank_S == rank_V


def bar_framework_rigid(graph: PlanarEmbeddedGraph, packing: Packing,
                        tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> bool:
    full = _stacked(graph, packing, range(1, graph.n + 1), tol)
    kernel_dim = 3 * graph.n - numerical_rank(full, tol.tol_rank)
    return kernel_dim == trivial_dim(graph.n)


class _IncrementalRowSpace:
    """Gram-Schmidt row basis for O(rows * cols) independence queries.

    Each query reports the residual norm of the candidate unit row against
    the current row space; the greedy loop maps it to independent /
    dependent / indeterminate.
    """

    def __init__(self, rows: np.ndarray):
        norms = np.linalg.norm(rows, axis=1, keepdims=True)
        q, _ = np.linalg.qr((rows / norms).T)
        self.basis = list(q.T[: rows.shape[0]])

    def residual(self, row: np.ndarray) -> tuple[float, np.ndarray]:
        r = row.astype(float)
        for b in self.basis:
            r = r - (b @ r) * b
        # second pass for orthogonality at machine precision
        for b in self.basis:
            r = r - (b @ r) * b
        return float(np.linalg.norm(r)), r

    def add(self, residual_vec: np.ndarray):
        self.basis.append(residual_vec / np.linalg.norm(residual_vec))


def greedy_min_cost_set(graph: PlanarEmbeddedGraph, packing: Packing,
                        cost: dict[int, float] | None = None,
                        tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> GreedyResult:
    """Minimum-cost maximal independent radius set by the matroid greedy.

    Requires an infinitesimally rigid bar framework; the result then has
    exactly 3n - m - 3 disks and fixing it (complement free) makes the
    packing infinitesimally rigid.  Candidates whose independence residual
    falls between the dependent and independent thresholds are skipped and
    reported rather than guessed.
    """
    n = graph.n
    if cost is None:
        cost = {v: 1.0 for v in range(1, n + 1)}
    if sorted(cost) != list(range(1, n + 1)):
        raise PackingError("cost must assign a value to every vertex")
    if any(c < 0 for c in cost.values()):
        raise PackingError("costs must be nonnegative")
    if not bar_framework_rigid(graph, packing, tol):
        raise BarFrameworkFlexibleError(
            "bar framework is infinitesimally flexible; maximal independent "
            "sets are not all of size 3n - m - 3")
    target = 3 * n - graph.m - trivial_dim(n)
    space = _IncrementalRowSpace(build_rigidity_matrix(graph, packing, tol).matrix)
    dependent_below = 10 * tol.tol_rank
    independent_above = tol.tol_strict
    chosen: list[int] = []
    skipped: list[int] = []
    for v in sorted(range(1, n + 1), key=lambda u: (cost[u], u)):
        if len(chosen) == target:
            break
        row = np.zeros(3 * n)
        row[3 * (v - 1) + 2] = 1.0
        eta, resid = space.residual(row)
        if eta >= independent_above:
            chosen.append(v)
            space.add(resid)
        elif eta > dependent_below:
            skipped.append(v)
    if len(chosen) != target:
        raise PackingError(
            f"greedy selected {len(chosen)} disks but the target size is {target}; "
            f"{len(skipped)} indeterminate candidate(s) skipped")
    S = tuple(sorted(chosen))
    rank = numerical_rank(_stacked(graph, packing, S, tol, check=False), tol.tol_rank)
    return GreedyResult(RadiusSet(S, rank), float(sum(cost[v] for v in S)),
                        tuple(skipped))
