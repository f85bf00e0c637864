import numpy as np
import pytest

from packrigid.linalg import (
    DecompositionError,
    cokernel_basis,
    kernel_basis,
    numerical_rank,
    rank_report,
)
from packrigid.rigidity import build_extended_matrix


def test_identity_rank():
    assert numerical_rank(np.eye(3)) == 3


def test_flower4_extended_rank(flower4):
    g, pk, part = flower4
    M = build_extended_matrix(g, pk, part).matrix
    assert M.shape == (13, 15)
    assert numerical_rank(M) == 12
    assert kernel_basis(M).shape[0] == 3
    assert cokernel_basis(M).shape[0] == 1


def test_duplicated_row_drops_rank(rng):
    M = rng.standard_normal((5, 5))
    M[3] = M[1]
    assert numerical_rank(M) == 4


def test_zero_matrix():
    assert numerical_rank(np.zeros((2, 3))) == 0
    assert kernel_basis(np.zeros((2, 3))).shape[0] == 3


def test_square_invertible_has_empty_cokernel(rng):
    M = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    assert cokernel_basis(M).shape[0] == 0


def test_rank_kernel_cokernel_dimensions(rng):
    for _ in range(30):
        rows = int(rng.integers(2, 9))
        cols = int(rng.integers(2, 9))
        r = int(rng.integers(0, min(rows, cols) + 1))
        M = rng.standard_normal((rows, r)) @ rng.standard_normal((r, cols))
        got = numerical_rank(M)
        assert got == r
        assert got + kernel_basis(M).shape[0] == cols
        assert got + cokernel_basis(M).shape[0] == rows


def test_rank_invariant_under_permutation_and_scale(rng):
    M = rng.standard_normal((6, 4)) @ rng.standard_normal((4, 7))
    base = numerical_rank(M)
    perm_rows = M[rng.permutation(6)]
    perm_cols = M[:, rng.permutation(7)]
    assert numerical_rank(perm_rows) == base
    assert numerical_rank(perm_cols) == base
    for k in range(-3, 4):
        assert numerical_rank(M * 10.0 ** k) == base


def test_kernel_residual_bound(rng):
    for _ in range(20):
        M = rng.standard_normal((7, 3)) @ rng.standard_normal((3, 9))
        basis = kernel_basis(M)
        norm = np.linalg.svd(M, compute_uv=False)[0]
        for v in basis:
            assert np.linalg.norm(M @ v) <= 10 * 1e-9 * norm
            assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)


def test_nonfinite_rejected():
    with pytest.raises(DecompositionError):
        numerical_rank(np.array([[1.0, np.nan]]))


def test_rank_report_near_cutoff_flag():
    M = np.diag([1.0, 1e-9, 1e-15])
    rep = rank_report(M, 1e-9)
    assert rep.near_cutoff
    clean = rank_report(np.diag([1.0, 0.5, 0.25]), 1e-9)
    assert not clean.near_cutoff
