import math

import numpy as np
import pytest

from packrigid.core import ConstraintPartition, Packing, PackingError, PlanarEmbeddedGraph
from packrigid.layout import random_layout_problem, solve_layout
from packrigid.linalg import numerical_rank
from packrigid.rigidity import (
    build_extended_matrix,
    build_fixing_rows,
    build_rigidity_matrix,
    flex_space_report,
    trivial_flex_basis,
)

S2 = math.sqrt(2)

# the 13x15 reference matrix: one row per edge in the order
# (1,2),(2,3),(3,4),(1,4),(1,5),(2,5),(3,5),(4,5), then one radius-fixing
# row per shrink-only disk 1..4 and one for the grow-only disk 5
GOLDEN_13x15 = np.array([
    [0, 2, -2,   0, -2, -2,  0,  0,  0,   0,  0,  0,   0,  0,  0],
    [0, 0,  0,   2,  0, -2, -2,  0, -2,   0,  0,  0,   0,  0,  0],
    [0, 0,  0,   0,  0,  0,  0, -2, -2,   0,  2, -2,   0,  0,  0],
    [2, 0, -2,   0,  0,  0,  0,  0,  0,  -2,  0, -2,   0,  0,  0],
    [1, 1, -S2,  0,  0,  0,  0,  0,  0,   0,  0,  0,  -1, -1, -S2],
    [0, 0,  0,   1, -1, -S2, 0,  0,  0,   0,  0,  0,  -1,  1, -S2],
    [0, 0,  0,   0,  0,  0, -1, -1, -S2,  0,  0,  0,   1,  1, -S2],
    [0, 0,  0,   0,  0,  0,  0,  0,  0,  -1,  1, -S2,  1, -1, -S2],
    [0, 0,  1,   0,  0,  0,  0,  0,  0,   0,  0,  0,   0,  0,  0],
    [0, 0,  0,   0,  0,  1,  0,  0,  0,   0,  0,  0,   0,  0,  0],
    [0, 0,  0,   0,  0,  0,  0,  0,  1,   0,  0,  0,   0,  0,  0],
    [0, 0,  0,   0,  0,  0,  0,  0,  0,   0,  0,  1,   0,  0,  0],
    [0, 0,  0,   0,  0,  0,  0,  0,  0,   0,  0,  0,   0,  0,  1],
])


def test_flower4_extended_matrix_entry_for_entry(flower4):
    g, pk, part = flower4
    Re = build_extended_matrix(g, pk, part)
    assert Re.matrix.shape == (13, 15)
    assert np.max(np.abs(Re.matrix - GOLDEN_13x15)) < 1e-12
    assert Re.fixing_order == (1, 2, 3, 4, 5)


def test_single_edge_row():
    g = PlanarEmbeddedGraph(2, ((1, 2),), ((2,), (1,)), (True, True))
    pk = Packing(np.array([[0.0, 0.0], [2.0, 0.0]]), np.array([1.0, 1.0]))
    R = build_rigidity_matrix(g, pk)
    assert np.allclose(R.matrix, [[-2, 0, -2, 2, 0, -2]])


def test_rigidity_matrix_rejects_invalid_packing(flower4):
    g, pk, _ = flower4
    bad = Packing(pk.centers, pk.radii * np.linspace(1.0, 1.5, 5))
    with pytest.raises(PackingError):
        build_rigidity_matrix(g, bad)


def test_fixing_rows():
    assert build_fixing_rows((), 4).shape == (0, 12)
    rows = build_fixing_rows((5,), 5)
    assert rows.shape == (1, 15)
    assert rows[0, 14] == 1.0
    assert np.sum(rows != 0) == 1
    with pytest.raises(PackingError):
        build_fixing_rows((6,), 5)


def test_all_vertices_fixed_matches_reference(flower4):
    # stacking fixing rows for every disk reproduces the reference matrix,
    # whose kernel is the 3 rigid motions (the bar framework is rigid)
    g, pk, _ = flower4
    R = build_rigidity_matrix(g, pk).matrix
    stacked = np.vstack([R, build_fixing_rows(range(1, 6), 5)])
    assert numerical_rank(stacked) == 12
    assert 15 - numerical_rank(stacked) == 3


def test_extended_all_free_is_plain_matrix(flower4):
    g, pk, _ = flower4
    Re = build_extended_matrix(g, pk, ConstraintPartition.all_free(5))
    R = build_rigidity_matrix(g, pk)
    assert np.array_equal(Re.matrix, R.matrix)


def test_trivial_flexes_in_kernel(flower4):
    g, pk, _ = flower4
    R = build_rigidity_matrix(g, pk).matrix
    for v in trivial_flex_basis(pk):
        assert np.max(np.abs(R @ v)) < 1e-12


def test_flower4_rotation_vector_entries(flower4):
    _, pk, _ = flower4
    rot = trivial_flex_basis(pk)[2]
    expected = [-1, 1, 0, 1, 1, 0, 1, -1, 0, -1, -1, 0, 0, 0, 0]
    assert np.allclose(rot, expected)


def test_single_disk_two_trivial_flexes():
    pk = Packing(np.array([[3.0, 4.0]]), np.array([2.0]))
    assert len(trivial_flex_basis(pk)) == 2


def test_flex_space_report_flower4(flower4):
    g, pk, part = flower4
    rep = flex_space_report(g, pk, part)
    assert (rep.dim_kernel_R, rep.dim_kernel_Re, rep.dim_kernel_Rprime) == (7, 3, 3)
    assert rep.nontrivial_fixed_radii_flexes == 0
    assert rep.free_disk_flexes == 0


def test_flex_space_report_prestress10(prestress10):
    g, pk, part = prestress10
    rep = flex_space_report(g, pk, part)
    assert rep.dim_kernel_R == 11
    assert rep.dim_kernel_Re == 4
    assert rep.dim_kernel_Rprime == 3
    assert rep.free_disk_flexes == 1


def test_kernel_dimension_law_on_random_layouts(rng):
    for _ in range(10):
        prob = random_layout_problem(rng)
        pk = solve_layout(prob)
        g = prob.graph
        rep = flex_space_report(g, pk, ConstraintPartition.all_free(g.n))
        b = sum(g.boundary)
        f = len(g.interior_faces())
        assert rep.dim_kernel_R == 3 * g.n - g.m
        assert rep.dim_kernel_R - 3 == b
        assert g.n - g.m + f == 1
        assert 3 * f == 2 * g.m - b


def test_cokernel_of_plain_matrix_empty(rng):
    from packrigid.linalg import cokernel_basis
    for _ in range(5):
        prob = random_layout_problem(rng)
        pk = solve_layout(prob)
        R = build_rigidity_matrix(prob.graph, pk).matrix
        assert cokernel_basis(R).shape[0] == 0


def test_extended_cokernel_stress_properties(prestress10):
    # every left-kernel vector of the extended matrix restricts to an
    # equilibrium stress whose radial force sums vanish on the free disks
    from packrigid.first_order import Stress
    from packrigid.linalg import cokernel_basis
    g, pk, part = prestress10
    Re = build_extended_matrix(g, pk, part)
    co = cokernel_basis(Re.matrix)
    assert co.shape[0] == 1
    stress = Stress.from_values(g, pk, co[0][: g.m])
    assert stress.equilibrium_residual < 1e-8
    for v in part.free:
        assert abs(stress.radial_sum(v)) < 1e-8
