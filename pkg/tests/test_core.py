import math

import numpy as np
import pytest

from packrigid.core import (
    BoundaryVertexError,
    ConstraintPartition,
    Packing,
    PackingError,
    PlanarEmbeddedGraph,
    Tag,
    angle_sum,
    tangency_residual,
    triangle_angle,
    validate_packing,
)
from packrigid.layout import wheel_graph


def test_triangle_angle_equilateral():
    assert triangle_angle(1, 1, 1) == pytest.approx(math.pi / 3, abs=1e-15)


def test_triangle_angle_grows_with_neighbors():
    assert triangle_angle(1, 5, 5) > triangle_angle(1, 1, 1)


def test_triangle_angle_sum_is_pi(rng):
    for _ in range(200):
        x, y, z = np.exp(rng.uniform(-2, 2, size=3))
        total = (triangle_angle(x, y, z) + triangle_angle(y, x, z)
                 + triangle_angle(z, x, y))
        assert total == pytest.approx(math.pi, abs=1e-12)


def test_triangle_angle_monotonicity(rng):
    for _ in range(200):
        x, y, z = np.exp(rng.uniform(-1.5, 1.5, size=3))
        h = 1e-3
        assert triangle_angle(x + h, y, z) < triangle_angle(x, y, z)
        assert triangle_angle(x, y + h, z) > triangle_angle(x, y, z)
        assert triangle_angle(x, y, z + h) > triangle_angle(x, y, z)


def test_triangle_angle_rejects_nonpositive():
    with pytest.raises(PackingError):
        triangle_angle(0.0, 1.0, 1.0)
    with pytest.raises(PackingError):
        triangle_angle(1.0, -1.0, 1.0)


def test_tangency_residual_exact_tangency():
    pk = Packing(np.array([[0.0, 0.0], [2.0, 0.0]]), np.array([1.0, 1.0]))
    assert tangency_residual(pk, (1, 2)) == pytest.approx(0.0, abs=1e-15)


def test_tangency_residual_flower_spoke(flower4):
    _, pk, _ = flower4
    assert tangency_residual(pk, (1, 5)) == pytest.approx(0.0, abs=1e-12)


def test_tangency_residual_arithmetic():
    pk = Packing(np.array([[0.0, 0.0], [3.0, 0.0]]), np.array([1.0, 1.0]))
    assert tangency_residual(pk, (1, 2)) == pytest.approx(5.0)


def test_tangency_residual_unknown_vertex():
    pk = Packing(np.array([[0.0, 0.0]]), np.array([1.0]))
    with pytest.raises(PackingError):
        tangency_residual(pk, (1, 2))


def test_angle_sum_hexagonal_flower():
    g = wheel_graph(6)
    radii = np.ones(7)
    assert angle_sum(radii, g, 7) == pytest.approx(2 * math.pi, abs=1e-12)


def test_angle_sum_flower4_center(flower4):
    g, pk, _ = flower4
    # each corner triple gives exactly a right angle at the center
    assert triangle_angle(math.sqrt(2) - 1, 1, 1) == pytest.approx(math.pi / 2, abs=1e-12)
    assert angle_sum(pk.radii, g, 5) == pytest.approx(2 * math.pi, abs=1e-12)


def test_angle_sum_halved_center_exceeds():
    g = wheel_graph(6)
    radii = np.ones(7)
    radii[6] = 0.5
    assert angle_sum(radii, g, 7) > 2 * math.pi


def test_angle_sum_boundary_vertex_rejected(flower4):
    g, pk, _ = flower4
    with pytest.raises(BoundaryVertexError):
        angle_sum(pk.radii, g, 1)


def test_validate_flower4_clean(flower4):
    g, pk, _ = flower4
    assert validate_packing(g, pk) == []


def test_validate_detects_tangency_breaks(flower4):
    g, pk, _ = flower4
    radii = pk.radii.copy()
    radii[4] *= 2.0
    bad = Packing(pk.centers, radii)
    report = validate_packing(g, bad)
    tangency = [v for v in report if v.kind == "tangency"]
    assert sorted(v.where for v in tangency) == [(1, 5), (2, 5), (3, 5), (4, 5)]


def test_validate_detects_reflected_rotation(flower4):
    # reversing a single vertex's rotation breaks the sphere embedding, so
    # the reflection test uses the full mirror graph; the reversed order at
    # vertex 5 must be flagged (cyclic shifts are fine, reflections are not)
    g, pk, _ = flower4
    rotation = tuple(tuple(reversed(r)) for r in g.rotation)
    mirrored = PlanarEmbeddedGraph(g.vertex_count, g.edges, rotation, g.boundary)
    report = validate_packing(mirrored, pk)
    assert any(v.kind == "orientation" and v.where == (5,) for v in report)


def test_validate_accepts_cyclic_shift(flower4):
    g, pk, _ = flower4
    rotation = list(g.rotation)
    rotation[4] = rotation[4][2:] + rotation[4][:2]
    shifted = PlanarEmbeddedGraph(g.vertex_count, g.edges, tuple(rotation), g.boundary)
    assert validate_packing(shifted, pk) == []


def test_validate_size_mismatch(flower4):
    g, _, _ = flower4
    pk = Packing(np.zeros((2, 2)) + [[0, 0], [2, 0]], np.ones(2))
    with pytest.raises(PackingError):
        validate_packing(g, pk)


def test_graph_rejects_duplicate_edge():
    with pytest.raises(PackingError):
        PlanarEmbeddedGraph(2, ((1, 2), (1, 2)), ((2,), (1,)), (True, True))


def test_graph_rejects_bad_rotation():
    with pytest.raises(PackingError):
        PlanarEmbeddedGraph(3, ((1, 2), (2, 3)), ((2,), (1,), (2,)), (True,) * 3)


def test_graph_rejects_disconnected():
    with pytest.raises(PackingError):
        PlanarEmbeddedGraph(4, ((1, 2), (3, 4)), ((2,), (1,), (4,), (3,)), (True,) * 4)


def test_graph_euler_count(flower4):
    g, _, _ = flower4
    assert g.face_count_total() == 5
    assert g.n - g.m + g.face_count_total() == 2
    assert len(g.interior_faces()) == 4
    assert g.outer_face() == (1, 2, 3, 4) or set(g.outer_face()) == {1, 2, 3, 4}


def test_single_disk_packing_valid():
    g = PlanarEmbeddedGraph(1, (), ((),), (True,))
    pk = Packing(np.array([[0.0, 0.0]]), np.array([1.0]))
    assert validate_packing(g, pk) == []


def test_partition_helpers():
    part = ConstraintPartition.from_symbols("+-=0")
    assert part.increase == (1,)
    assert part.decrease == (2,)
    assert part.fixed == (3,)
    assert part.free == (4,)
    swapped = part.swap_signs()
    assert swapped.tags[0] is Tag.DECREASE
    assert swapped.tags[1] is Tag.INCREASE
    assert swapped.tags[2:] == part.tags[2:]
