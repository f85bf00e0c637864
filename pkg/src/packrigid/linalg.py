"""Tolerance-controlled dense rank, kernel and cokernel via SVD."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DecompositionError(ValueError):
    """SVD could not be computed (non-finite input or LAPACK failure)."""


@dataclass(frozen=True)
class RankReport:
    rank: int
    singular_values: np.ndarray
    cutoff: float
    near_cutoff: bool  # some singular value within 10x of the cutoff


def _svd(matrix) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    if not np.all(np.isfinite(m)):
        raise DecompositionError("matrix entries must be finite")
    try:
        return np.linalg.svd(m, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(str(exc)) from exc


def rank_report(matrix, tol_rank: float = 1e-9) -> RankReport:
    """Rank at a relative singular-value cutoff, plus the spectrum.

    ``near_cutoff`` flags spectra where some singular value lies within a
    decade of the cutoff, i.e. where the rank decision is fragile.
    """
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    if m.size == 0:
        return RankReport(0, np.zeros(0), 0.0, False)
    _, s, _ = _svd(m)
    if s.size == 0 or s[0] == 0.0:
        return RankReport(0, s, 0.0, False)
    cutoff = tol_rank * s[0]
    rank = int(np.sum(s > cutoff))
    near = bool(np.any((s > cutoff / 10.0) & (s < cutoff * 10.0)))
    return RankReport(rank, s, cutoff, near)


def numerical_rank(matrix, tol_rank: float = 1e-9) -> int:
    """Number of singular values above tol_rank times the largest one."""
    return rank_report(matrix, tol_rank).rank


def kernel_basis(matrix, tol_rank: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of the right null space, as rows of the result.

    Each basis vector v satisfies ||M v|| <= 10 * tol_rank * ||M||.
    """
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    if m.size == 0:
        cols = m.shape[1] if m.ndim == 2 else 0
        return np.eye(cols)
    _, s, vt = _svd(m)
    rank = rank_report(m, tol_rank).rank
    return vt[rank:]


def cokernel_basis(matrix, tol_rank: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of the left null space (kernel of the transpose)."""
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    return kernel_basis(m.T, tol_rank)
