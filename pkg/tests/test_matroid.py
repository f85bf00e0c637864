import itertools

import numpy as np
import pytest

from packrigid.core import Packing, PlanarEmbeddedGraph
from packrigid.layout import random_layout_problem, solve_layout
from packrigid.matroid import (
    BarFrameworkFlexibleError,
    bar_framework_rigid,
    greedy_min_cost_set,
    is_independent,
    is_maximal,
)


def test_empty_set_independent(flower4):
    g, pk, _ = flower4
    assert is_independent(g, pk, ())


def test_general10_memberships(general10):
    g, pk, _ = general10
    green = (2, 4, 5, 6, 8, 9, 10)
    assert is_independent(g, pk, green)
    assert not is_maximal(g, pk, green)
    assert not is_independent(g, pk, green + (7,))
    assert not is_maximal(g, pk, green + (7,))
    assert is_independent(g, pk, green + (1,))
    assert is_maximal(g, pk, green + (1,))


def test_full_vertex_set_maximal(flower4):
    g, pk, _ = flower4
    assert is_maximal(g, pk, tuple(range(1, 6)))


def test_greedy_prefers_zero_cost_greens(general10):
    g, pk, _ = general10
    green = (2, 4, 5, 6, 8, 9, 10)
    cost = {v: (0.0 if v in green else 1.0) for v in range(1, 11)}
    result = greedy_min_cost_set(g, pk, cost)
    S = result.radius_set.vertices
    assert set(green) <= set(S)
    assert len(S) == 8
    assert 7 not in S
    assert result.total_cost == pytest.approx(1.0)


def test_greedy_matches_exhaustive_on_flower(flower4):
    g, pk, _ = flower4
    rng = np.random.default_rng(3)
    for _ in range(5):
        cost = {v: float(rng.uniform(0.1, 2.0)) for v in range(1, 6)}
        result = greedy_min_cost_set(g, pk, cost)
        best = min(
            sum(cost[v] for v in S)
            for S in itertools.combinations(range(1, 6), 4)
            if is_independent(g, pk, S) and is_maximal(g, pk, S))
        assert result.total_cost == pytest.approx(best, rel=1e-12)


def test_hereditary_property(general10, rng):
    g, pk, _ = general10
    base = (1, 2, 4, 5, 6, 8, 9, 10)
    assert is_independent(g, pk, base)
    for _ in range(20):
        k = int(rng.integers(0, len(base) + 1))
        subset = tuple(sorted(rng.choice(base, size=k, replace=False)))
        assert is_independent(g, pk, subset)


def test_exchange_property(general10, rng):
    g, pk, _ = general10
    verts = list(range(1, 11))
    for _ in range(30):
        a = tuple(sorted(rng.choice(verts, size=int(rng.integers(2, 7)), replace=False)))
        b = tuple(sorted(rng.choice(verts, size=int(rng.integers(1, len(a))), replace=False)))
        if not (is_independent(g, pk, a) and is_independent(g, pk, b)):
            continue
        if len(a) <= len(b):
            continue
        assert any(is_independent(g, pk, b + (x,)) for x in a if x not in b)


def test_randomized_greedy_orders_share_cardinality(general10, rng):
    g, pk, _ = general10
    target = 3 * g.n - g.m - 3
    for _ in range(10):
        order = rng.permutation(np.arange(1, g.n + 1))
        S = []
        for v in order:
            if is_independent(g, pk, tuple(S) + (int(v),)):
                S.append(int(v))
        assert is_maximal(g, pk, tuple(S))
        assert len(S) == target


def test_incremental_matches_svd_on_random_instances(rng):
    for _ in range(5):
        prob = random_layout_problem(rng, ring=int(rng.integers(4, 7)), stacked=1)
        pk = solve_layout(prob)
        g = prob.graph
        if not bar_framework_rigid(g, pk):
            continue
        result = greedy_min_cost_set(g, pk)
        S = result.radius_set.vertices
        assert is_independent(g, pk, S)
        assert is_maximal(g, pk, S)
        assert len(S) == 3 * g.n - g.m - 3
        assert result.radius_set.rank == g.m + len(S)


def test_bar_flexible_precondition_reported():
    g = PlanarEmbeddedGraph(3, ((1, 2), (2, 3)), ((2,), (1, 3), (2,)),
                            (True, True, True))
    pk = Packing(np.array([[0.0, 0.0], [2.0, 0.0], [4.0, 0.0]]), np.ones(3))
    assert not bar_framework_rigid(g, pk)
    with pytest.raises(BarFrameworkFlexibleError):
        greedy_min_cost_set(g, pk)
