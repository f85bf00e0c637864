"""Small dense linear programming with infeasibility certificates.

Two-phase tableau simplex with Bland's anti-cycling rule.  Problems here are
tiny (a few hundred variables), so the priorities are determinism, exact
status classification and certificate extraction, not speed.

``solve`` maximizes ``lp.objective`` subject to equality rows, row.x <= rhs
rows and per-variable bounds.  Outcomes carry either a feasible point, a
Farkas certificate of infeasibility, or an unbounded ray; ``farkas_check``
re-verifies whichever side was produced by direct evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

_PIVOT_EPS = 1e-11


class LpError(ValueError):
    """Ill-formed linear program."""


class NumericalBreakdownError(RuntimeError):
    """Pivot limit exceeded; reported distinctly from infeasibility."""


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LinearProgram:
    """max objective.x  s.t.  eq_rows x = eq_rhs,  ub_rows x <= ub_rhs, bounds."""

    objective: np.ndarray
    eq_rows: np.ndarray | None = None
    eq_rhs: np.ndarray | None = None
    ub_rows: np.ndarray | None = None
    ub_rhs: np.ndarray | None = None
    bounds: list[tuple[float | None, float | None]] | None = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        if self.objective.ndim != 1:
            raise LpError("objective must be a vector")
        nv = self.objective.size
        self.eq_rows, self.eq_rhs = _as_rows(self.eq_rows, self.eq_rhs, nv, "eq")
        self.ub_rows, self.ub_rhs = _as_rows(self.ub_rows, self.ub_rhs, nv, "ub")
        if self.bounds is None:
            self.bounds = [(None, None)] * nv
        if len(self.bounds) != nv:
            raise LpError("bounds length must equal variable count")
        for lo, hi in self.bounds:
            if lo is not None and hi is not None and lo > hi:
                raise LpError(f"empty bound interval ({lo}, {hi})")
        for arr in (self.objective, self.eq_rows, self.eq_rhs, self.ub_rows, self.ub_rhs):
            if not np.all(np.isfinite(arr)):
                raise LpError("all coefficients must be finite")

    @property
    def n_vars(self) -> int:
        return self.objective.size


def _as_rows(rows, rhs, nv, label):
    if rows is None:
        return np.zeros((0, nv)), np.zeros(0)
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
    if rows.shape[0] != rhs.shape[0] or (rows.size and rows.shape[1] != nv):
        raise LpError(f"{label} rows/rhs shapes are inconsistent")
    return rows, rhs


@dataclass
class LpOutcome:
    status: LpStatus
    point: np.ndarray | None = None
    certificate: np.ndarray | None = None
    ray: np.ndarray | None = None
    objective_value: float | None = None
    iterations: int = 0
    phase1_infeasibility: float = 0.0


@dataclass
class _Standardized:
    """min c.u  s.t.  A u = b, u >= 0, with the original x recoverable from u."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    n_structural: int           # columns before slacks
    n_rows_eq: int
    recover: list[tuple]        # per original variable: how to rebuild x_j
    slack_cols: list[int]       # column index of each ub row's slack


def standardize(lp: LinearProgram) -> _Standardized:
    """Deterministic reduction to equality standard form with u >= 0.

    Bounded variables are shifted (and upper bounds become extra <= rows),
    free variables are split into positive parts.
    """
    nv = lp.n_vars
    cols = []          # one entry per structural column: (orig var, sign)
    recover = []
    offsets = np.zeros(nv)
    extra_ub_rows = []
    extra_ub_rhs = []
    for j, (lo, hi) in enumerate(lp.bounds):
        if lo is not None:
            cols.append((j, 1.0))
            recover.append(("shift", len(cols) - 1, lo))
            offsets[j] = lo
            if hi is not None:
                row = np.zeros(nv)
                row[j] = 1.0
                extra_ub_rows.append(row)
                extra_ub_rhs.append(hi)
        elif hi is not None:
            cols.append((j, -1.0))
            recover.append(("neg_shift", len(cols) - 1, hi))
            offsets[j] = hi
        else:
            cols.append((j, 1.0))
            cols.append((j, -1.0))
            recover.append(("split", len(cols) - 2, len(cols) - 1))

    ub_rows = np.vstack([lp.ub_rows, np.asarray(extra_ub_rows)]) if extra_ub_rows \
        else lp.ub_rows
    ub_rhs = np.concatenate([lp.ub_rhs, np.asarray(extra_ub_rhs)]) if extra_ub_rhs \
        else lp.ub_rhs

    n_struct = len(cols)
    n_eq = lp.eq_rows.shape[0]
    n_ub = ub_rows.shape[0]
    A = np.zeros((n_eq + n_ub, n_struct + n_ub))
    b = np.zeros(n_eq + n_ub)
    c = np.zeros(n_struct + n_ub)
    for k, (j, sign) in enumerate(cols):
        if n_eq:
            A[:n_eq, k] = sign * lp.eq_rows[:, j]
        if n_ub:
            A[n_eq:, k] = sign * ub_rows[:, j]
        c[k] = -sign * lp.objective[j]      # minimize -objective
    slack_cols = []
    for i in range(n_ub):
        A[n_eq + i, n_struct + i] = 1.0
        slack_cols.append(n_struct + i)
    if n_eq:
        b[:n_eq] = lp.eq_rhs - lp.eq_rows @ offsets
    if n_ub:
        b[n_eq:] = ub_rhs - ub_rows @ offsets
    return _Standardized(A, b, c, n_struct, n_eq, recover, slack_cols)


def _recover_point(std: _Standardized, u: np.ndarray, lp: LinearProgram) -> np.ndarray:
    x = np.zeros(lp.n_vars)
    for j, rec in enumerate(std.recover):
        if rec[0] == "shift":
            x[j] = rec[2] + u[rec[1]]
        elif rec[0] == "neg_shift":
            x[j] = rec[2] - u[rec[1]]
        else:
            x[j] = u[rec[1]] - u[rec[2]]
    return x


def _recover_direction(std: _Standardized, du: np.ndarray, lp: LinearProgram) -> np.ndarray:
    d = np.zeros(lp.n_vars)
    for j, rec in enumerate(std.recover):
        if rec[0] == "shift":
            d[j] = du[rec[1]]
        elif rec[0] == "neg_shift":
            d[j] = -du[rec[1]]
        else:
            d[j] = du[rec[1]] - du[rec[2]]
    return d


class _Simplex:
    """Dense tableau simplex, minimizing c.u over {Au = b, u >= 0}.

    Entering column by most-negative reduced cost and leaving row by a
    stability-biased ratio test; after a long run of degenerate pivots both
    rules switch to Bland's anti-cycling order.  Pivots smaller than 1e-9
    are never taken, and the right-hand side column is clamped against
    roundoff drift, so basic solutions stay feasible.
    """

    RATIO_EPS = 1e-9

    def __init__(self, A, b, c, max_pivots):
        rows, cols = A.shape
        sign = np.where(b < 0.0, -1.0, 1.0)
        self.A = A * sign[:, None]
        self.b = b * sign
        self.c = c
        self.rows = rows
        self.cols = cols
        self.max_pivots = max_pivots
        self.pivots = 0
        self.stalled = 0
        self.stall_limit = 40 + rows + cols
        # artificial basis
        self.T = np.zeros((rows + 1, cols + rows + 1))
        self.T[1:, :cols] = self.A
        self.T[1:, cols:cols + rows] = np.eye(rows)
        self.T[1:, -1] = self.b
        self.basis = list(range(cols, cols + rows))
        self.art_range = (cols, cols + rows)

    def _set_objective(self, cost):
        self.T[0, :] = 0.0
        self.T[0, :len(cost)] = cost
        for i, bv in enumerate(self.basis):
            if self.T[0, bv] != 0.0:
                self.T[0, :] -= self.T[0, bv] * self.T[i + 1, :]

    def _pivot(self, row, col):
        T = self.T
        T[row] = T[row] / T[row, col]
        coef = T[:, col].copy()
        coef[row] = 0.0
        T -= np.outer(coef, T[row])
        T[:, col] = 0.0
        T[row, col] = 1.0
        rhs = T[1:, -1]
        np.copyto(rhs, np.where((rhs < 0.0) & (rhs > -1e-9), 0.0, rhs))
        self.basis[row - 1] = col
        self.pivots += 1
        if self.pivots > self.max_pivots:
            raise NumericalBreakdownError(
                f"simplex exceeded {self.max_pivots} pivots (possible cycling)")

    def _iterate(self, allowed_cols):
        """Pivot to optimality; returns None or the unbounded column."""
        while True:
            rc = self.T[0, :-1]
            bland = self.stalled > self.stall_limit
            entering = -1
            if bland:
                for j in allowed_cols:
                    if rc[j] < -_PIVOT_EPS:
                        entering = j
                        break
            else:
                best = -_PIVOT_EPS
                for j in allowed_cols:
                    if rc[j] < best:
                        best = rc[j]
                        entering = j
            if entering < 0:
                return None
            col = self.T[1:, entering]
            best_row, best_ratio, best_bv, best_piv = -1, np.inf, None, 0.0
            for i in range(self.rows):
                piv = col[i]
                if piv <= self.RATIO_EPS:
                    continue
                ratio = self.T[i + 1, -1] / piv
                bv = self.basis[i]
                if ratio < best_ratio - 1e-9:
                    best_row, best_ratio, best_bv, best_piv = i + 1, ratio, bv, piv
                elif ratio <= best_ratio + 1e-9:
                    # tie: prefer the anti-cycling order when stalled,
                    # otherwise the numerically largest pivot
                    take = (bv < best_bv) if bland else (piv > best_piv)
                    if take:
                        best_row, best_ratio, best_bv, best_piv = i + 1, ratio, bv, piv
            if best_row < 0:
                return entering
            before = self.T[0, -1]
            self._pivot(best_row, entering)
            if self.T[0, -1] > before + 1e-12:
                self.stalled = 0
            else:
                self.stalled += 1

    def solve_two_phase(self):
        """Returns (status, u, ray_u, y, phase1_value)."""
        cols = self.cols
        art_lo, art_hi = self.art_range
        phase1_cost = np.zeros(cols + self.rows)
        phase1_cost[art_lo:art_hi] = 1.0
        self._set_objective(phase1_cost)
        structural = list(range(cols))
        self._iterate(structural)
        phase1_value = -self.T[0, -1]
        feas_tol = 1e-9 * max(1.0, float(np.max(np.abs(self.b))) if self.b.size else 1.0)
        if phase1_value > feas_tol:
            # Farkas certificate from the phase-1 multipliers: y_i = 1 - rc(art_i),
            # then undo the row sign flips applied in __init__.
            rc_art = self.T[0, art_lo:art_hi]
            y = 1.0 - rc_art
            return LpStatus.INFEASIBLE, None, None, y, phase1_value

        # drive leftover artificials out of the basis where possible
        for i in range(self.rows):
            if art_lo <= self.basis[i] < art_hi:
                row = self.T[i + 1, :cols]
                j = next((k for k in range(cols) if abs(row[k]) > 1e-9), None)
                if j is not None:
                    self._pivot(i + 1, j)

        self._set_objective(np.concatenate([self.c, np.zeros(self.rows)]))
        unbounded_col = self._iterate(structural)
        u = np.zeros(cols)
        for i, bv in enumerate(self.basis):
            if bv < cols:
                u[bv] = self.T[i + 1, -1]
        if unbounded_col is not None:
            ray = np.zeros(cols)
            ray[unbounded_col] = 1.0
            for i, bv in enumerate(self.basis):
                if bv < cols:
                    ray[bv] = -self.T[i + 1, unbounded_col]
            return LpStatus.UNBOUNDED, u, ray, None, phase1_value
        return LpStatus.OPTIMAL, u, None, None, phase1_value


def solve(lp: LinearProgram, tol_lp: float = 1e-7) -> LpOutcome:
    """Solve ``lp``; deterministic for a fixed input.

    Optimal points are re-verified for feasibility before being returned; a
    basic solution that drifted out of the feasible region raises
    NumericalBreakdownError instead of being reported as optimal.
    """
    std = standardize(lp)
    rows, cols = std.A.shape
    max_pivots = 2000 + 60 * (rows + cols)
    simplex = _Simplex(std.A, std.b, std.c, max_pivots)
    status, u, ray_u, y, p1 = simplex.solve_two_phase()
    if status is LpStatus.INFEASIBLE:
        sign = np.where(std.b < 0.0, -1.0, 1.0)
        return LpOutcome(LpStatus.INFEASIBLE, certificate=y * sign,
                         iterations=simplex.pivots, phase1_infeasibility=p1)
    point = _recover_point(std, u, lp)
    if status is LpStatus.UNBOUNDED:
        ray = _recover_direction(std, ray_u, lp)
        return LpOutcome(LpStatus.UNBOUNDED, point=point, ray=ray,
                         objective_value=float("inf"), iterations=simplex.pivots)
    if not _feasible(lp, point, max(tol_lp, 1e-8)):
        raise NumericalBreakdownError(
            "simplex returned an infeasible basic solution")
    return LpOutcome(LpStatus.OPTIMAL, point=point,
                     objective_value=float(lp.objective @ point),
                     iterations=simplex.pivots)


def _feasible(lp: LinearProgram, x: np.ndarray, tol: float) -> bool:
    scale = max(1.0, float(np.max(np.abs(x))))
    if lp.eq_rows.size:
        row_scale = np.maximum(1.0, np.abs(lp.eq_rows) @ np.abs(x))
        if np.max(np.abs(lp.eq_rows @ x - lp.eq_rhs) / row_scale) > tol:
            return False
    if lp.ub_rows.size:
        row_scale = np.maximum(1.0, np.abs(lp.ub_rows) @ np.abs(x))
        if np.max((lp.ub_rows @ x - lp.ub_rhs) / row_scale) > tol:
            return False
    for j, (lo, hi) in enumerate(lp.bounds):
        if lo is not None and x[j] < lo - tol * scale:
            return False
        if hi is not None and x[j] > hi + tol * scale:
            return False
    return True


def farkas_check(outcome: LpOutcome, lp: LinearProgram, tol_lp: float = 1e-7) -> bool:
    """Re-verify the produced side of the alternative by direct evaluation.

    Optimal: the point satisfies every original constraint.  Infeasible: the
    certificate y has y.A <= 0 on every column of the standardized system and
    y.b > 0.  Unbounded: the point is feasible and the ray is an improving
    recession direction.  Returns False on any violation.
    """
    if outcome.status is LpStatus.OPTIMAL:
        return outcome.point is not None and _feasible(lp, outcome.point, tol_lp)
    if outcome.status is LpStatus.INFEASIBLE:
        y = outcome.certificate
        if y is None:
            return False
        std = standardize(lp)
        norm = float(np.max(np.abs(y)))
        if norm == 0.0:
            return False
        y = y / norm
        col_scale = np.maximum(1.0, np.abs(y) @ np.abs(std.A))
        if np.max((y @ std.A) / col_scale) > tol_lp:
            return False
        rhs_scale = max(1.0, float(np.abs(y) @ np.abs(std.b)))
        return float(y @ std.b) / rhs_scale > tol_lp / 10.0
    if outcome.status is LpStatus.UNBOUNDED:
        if outcome.point is None or outcome.ray is None:
            return False
        if not _feasible(lp, outcome.point, tol_lp):
            return False
        d = outcome.ray
        dscale = float(np.max(np.abs(d)))
        if dscale == 0.0:
            return False
        d = d / dscale
        if lp.eq_rows.size and np.max(np.abs(lp.eq_rows @ d)) > tol_lp:
            return False
        if lp.ub_rows.size and np.max(lp.ub_rows @ d) > tol_lp:
            return False
        for j, (lo, hi) in enumerate(lp.bounds):
            if lo is not None and d[j] < -tol_lp:
                return False
            if hi is not None and d[j] > tol_lp:
                return False
        return float(lp.objective @ d) > tol_lp
    return False
