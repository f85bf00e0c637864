"""Embedded graphs, constraint partitions, packings and tangent-circle geometry.

Vertex ids are dense integers 1..n.  A packing is the vector
p = <x_1, y_1, r_1, ..., x_n, y_n, r_n> of disk centers and radii; every
graph edge must be realized as an external tangency and the counterclockwise
order of neighbors around each center must match the graph's rotation system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * math.pi


class PackingError(ValueError):
    """Ill-formed graph, partition or packing data."""


class BoundaryVertexError(PackingError):
    """Operation requires an interior vertex."""


class Tag(Enum):
    """Radius constraint of one disk."""

    INCREASE = "+"   # radius may grow or stay
    DECREASE = "-"   # radius may shrink or stay
    FIXED = "="      # radius is pinned
    FREE = "0"       # unconstrained

    @classmethod
    def from_symbol(cls, s: str) -> "Tag":
        try:
            return cls(s)
        except ValueError:
            raise PackingError(f"unknown constraint tag {s!r}") from None


@dataclass(frozen=True)
class ConstraintPartition:
    """Total assignment of every vertex to one of the four constraint classes."""

    tags: tuple[Tag, ...]

    def __post_init__(self):
        if not self.tags:
            raise PackingError("partition must cover at least one vertex")

    @classmethod
    def from_symbols(cls, symbols) -> "ConstraintPartition":
        return cls(tuple(Tag.from_symbol(s) for s in symbols))

    @classmethod
    def all_free(cls, n: int) -> "ConstraintPartition":
        return cls((Tag.FREE,) * n)

    @classmethod
    def all_fixed(cls, n: int) -> "ConstraintPartition":
        return cls((Tag.FIXED,) * n)

    def tag(self, v: int) -> Tag:
        return self.tags[v - 1]

    def vertices_with(self, tag: Tag) -> tuple[int, ...]:
        return tuple(v for v in range(1, len(self.tags) + 1) if self.tags[v - 1] is tag)

    @property
    def increase(self) -> tuple[int, ...]:
        return self.vertices_with(Tag.INCREASE)

    @property
    def decrease(self) -> tuple[int, ...]:
        return self.vertices_with(Tag.DECREASE)

    @property
    def fixed(self) -> tuple[int, ...]:
        return self.vertices_with(Tag.FIXED)

    @property
    def free(self) -> tuple[int, ...]:
        return self.vertices_with(Tag.FREE)

    @property
    def constrained(self) -> tuple[int, ...]:
        """Vertices with a radius constraint, in the row-stacking order -, +, =."""
        return self.decrease + self.increase + self.fixed

    def swap_signs(self) -> "ConstraintPartition":
        swap = {Tag.INCREASE: Tag.DECREASE, Tag.DECREASE: Tag.INCREASE}
        return ConstraintPartition(tuple(swap.get(t, t) for t in self.tags))


@dataclass(frozen=True)
class PlanarEmbeddedGraph:
    """Planar graph with a counterclockwise rotation system and boundary flags.

    ``edges`` keeps construction order (it fixes the row order of rigidity
    matrices); each edge is stored as an (i, j) pair with i < j.
    ``rotation[v-1]`` lists the neighbors of v in counterclockwise order.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    rotation: tuple[tuple[int, ...], ...]
    boundary: tuple[bool, ...]

    def __post_init__(self):
        n = self.vertex_count
        if n < 1:
            raise PackingError("vertex_count must be positive")
        if len(self.rotation) != n or len(self.boundary) != n:
            raise PackingError("rotation/boundary length must equal vertex_count")
        seen = set()
        adjacency = {v: set() for v in range(1, n + 1)}
        for i, j in self.edges:
            if not (1 <= i <= n and 1 <= j <= n):
                raise PackingError(f"edge ({i},{j}) references unknown vertex")
            if i == j:
                raise PackingError(f"self-loop at vertex {i}")
            if i > j:
                raise PackingError(f"edge ({i},{j}) must be stored with i < j")
            if (i, j) in seen:
                raise PackingError(f"duplicate edge ({i},{j})")
            seen.add((i, j))
            adjacency[i].add(j)
            adjacency[j].add(i)
        for v in range(1, n + 1):
            rot = self.rotation[v - 1]
            if set(rot) != adjacency[v] or len(rot) != len(adjacency[v]):
                raise PackingError(f"rotation[{v}] is not a permutation of its neighbors")
        if n > 1 and not _connected(n, adjacency):
            raise PackingError("graph must be connected")
        faces = self.face_count_total()
        if n - len(self.edges) + faces != 2:
            raise PackingError(
                "rotation system is not a sphere embedding: "
                f"n - m + f = {n - len(self.edges) + faces} != 2"
            )

    @classmethod
    def from_rotations(cls, rotation_map: dict[int, list[int]],
                       boundary: set[int] | frozenset[int],
                       edge_order: list[tuple[int, int]] | None = None) -> "PlanarEmbeddedGraph":
        """Build from a {vertex: ccw neighbor list} map.

        Edge order defaults to first-appearance order while scanning vertices;
        pass ``edge_order`` to pin rigidity-matrix row order explicitly.
        """
        n = max(rotation_map)
        if sorted(rotation_map) != list(range(1, n + 1)):
            raise PackingError("vertex ids must be dense integers 1..n")
        edges = []
        seen = set()
        if edge_order is not None:
            for i, j in edge_order:
                e = (min(i, j), max(i, j))
                if e in seen:
                    raise PackingError(f"duplicate edge {e} in edge_order")
                seen.add(e)
                edges.append(e)
        for v in sorted(rotation_map):
            for u in rotation_map[v]:
                e = (min(u, v), max(u, v))
                if e not in seen:
                    seen.add(e)
                    edges.append(e)
        rotation = tuple(tuple(rotation_map[v]) for v in range(1, n + 1))
        bnd = tuple(v in boundary for v in range(1, n + 1))
        return cls(n, tuple(edges), rotation, bnd)

    # -- derived structure ------------------------------------------------

    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.rotation[v - 1]

    def degree(self, v: int) -> int:
        return len(self.rotation[v - 1])

    def edge_index(self, i: int, j: int) -> int:
        return _edge_index_map(self)[(min(i, j), max(i, j))]

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in _edge_index_map(self)

    def boundary_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(1, self.n + 1) if self.boundary[v - 1])

    def interior_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(1, self.n + 1) if not self.boundary[v - 1])

    def faces(self) -> tuple[tuple[int, ...], ...]:
        """All faces of the rotation system (interior faces counterclockwise)."""
        return _trace_faces(self)

    def face_count_total(self) -> int:
        if not self.edges:
            return 1  # a lone disk has the whole plane as its single face
        return len(_trace_faces(self))

    def interior_faces(self) -> tuple[tuple[int, ...], ...]:
        """Faces other than the outer one (requires boundary flags to identify it)."""
        faces = _trace_faces(self)
        if self.n == 1:
            return ()
        outer = self.outer_face()
        out = list(faces)
        out.remove(outer)
        return tuple(out)

    def outer_face(self) -> tuple[int, ...]:
        """The face traced along the boundary vertices.

        Identified combinatorially: the unique face using only boundary
        vertices and visiting each exactly once, of length b.
        """
        b = sum(self.boundary)
        candidates = [
            f for f in _trace_faces(self)
            if len(f) == b and len(set(f)) == b
            and all(self.boundary[v - 1] for v in f)
        ]
        if len(candidates) != 1:
            raise PackingError(
                f"cannot identify outer face: {len(candidates)} candidate(s) "
                "match the boundary flags"
            )
        return candidates[0]


def _connected(n, adjacency) -> bool:
    seen = {1}
    stack = [1]
    while stack:
        v = stack.pop()
        for u in adjacency[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


@lru_cache(maxsize=512)
def _edge_index_map(graph: PlanarEmbeddedGraph) -> dict[tuple[int, int], int]:
    return {e: k for k, e in enumerate(graph.edges)}


@lru_cache(maxsize=512)
def _trace_faces(graph: PlanarEmbeddedGraph) -> tuple[tuple[int, ...], ...]:
    # Directed-edge walk: from (u -> v) continue to (v -> w) where w precedes
    # u in rotation[v].  With counterclockwise rotations this traces the face
    # to the left of each directed edge; interior faces come out ccw and the
    # outer face cw.
    pos = {}
    for v in range(1, graph.n + 1):
        rot = graph.rotation[v - 1]
        for k, u in enumerate(rot):
            pos[(v, u)] = k
    remaining = {(i, j) for i, j in graph.edges} | {(j, i) for i, j in graph.edges}
    faces = []
    while remaining:
        start = min(remaining)
        walk = [start]
        remaining.discard(start)
        while True:
            u, v = walk[-1]
            rot = graph.rotation[v - 1]
            w = rot[(pos[(v, u)] - 1) % len(rot)]
            nxt = (v, w)
            if nxt == start:
                break
            if nxt not in remaining:
                raise PackingError("rotation system walk revisited a directed edge")
            remaining.discard(nxt)
            walk.append(nxt)
        faces.append(tuple(e[0] for e in walk))
    return tuple(faces)


@dataclass(frozen=True)
class Packing:
    """Disk centers and positive radii; jointly a point of R^{3n}."""

    centers: np.ndarray  # (n, 2)
    radii: np.ndarray    # (n,)

    def __post_init__(self):
        centers = np.ascontiguousarray(np.asarray(self.centers, dtype=float))
        radii = np.ascontiguousarray(np.asarray(self.radii, dtype=float))
        if centers.ndim != 2 or centers.shape[1] != 2 or radii.ndim != 1:
            raise PackingError("centers must be (n, 2) and radii (n,)")
        if centers.shape[0] != radii.shape[0] or radii.shape[0] < 1:
            raise PackingError("centers and radii must cover the same n >= 1 disks")
        if not (np.all(np.isfinite(centers)) and np.all(np.isfinite(radii))):
            raise PackingError("packing data must be finite")
        if np.any(radii <= 0.0):
            bad = int(np.argmin(radii)) + 1
            raise PackingError(f"radius of disk {bad} is not positive")
        centers.setflags(write=False)
        radii.setflags(write=False)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "radii", radii)

    @property
    def n(self) -> int:
        return self.radii.shape[0]

    def center(self, v: int) -> np.ndarray:
        return self.centers[v - 1]

    def radius(self, v: int) -> float:
        return float(self.radii[v - 1])

    def as_vector(self) -> np.ndarray:
        """The flat coordinate vector (x_1, y_1, r_1, ..., x_n, y_n, r_n)."""
        out = np.empty(3 * self.n)
        out[0::3] = self.centers[:, 0]
        out[1::3] = self.centers[:, 1]
        out[2::3] = self.radii
        return out

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "Packing":
        vec = np.asarray(vec, dtype=float)
        if vec.ndim != 1 or vec.size % 3 != 0:
            raise PackingError("coordinate vector length must be 3n")
        n = vec.size // 3
        centers = np.stack([vec[0::3], vec[1::3]], axis=1)
        return cls(centers, vec[2::3].copy())

    def scaled(self, s: float) -> "Packing":
        return Packing(self.centers * s, self.radii * s)


@dataclass(frozen=True)
class AnalysisTolerances:
    """Numerical thresholds shared by the analysis modules.

    tol_tangency is relative to (r_i + r_j)^2, tol_rank is relative to the
    largest singular value, tol_strict decides when a flex entry counts as a
    strict radius change, tol_lp is the LP margin for "strictly positive".
    """

    tol_tangency: float = 1e-8
    tol_rank: float = 1e-9
    tol_strict: float = 1e-6
    tol_lp: float = 1e-7

    def __post_init__(self):
        for name in ("tol_tangency", "tol_rank", "tol_strict", "tol_lp"):
            if getattr(self, name) <= 0.0:
                raise PackingError(f"{name} must be strictly positive")
        if not self.tol_strict > self.tol_rank:
            raise PackingError("tol_strict must exceed tol_rank")


DEFAULT_TOLERANCES = AnalysisTolerances()


@dataclass(frozen=True)
class Violation:
    kind: str      # nonpositive_radius | tangency | orientation
    where: tuple   # vertex id or edge pair
    detail: str
    magnitude: float = 0.0


# -- geometry ---------------------------------------------------------------

def triangle_angle(x: float, y: float, z: float) -> float:
    """Angle at the center of the radius-x disk in a mutually tangent triple.

    Strictly decreasing in x, strictly increasing in y and z; the three
    angles of a triple sum to pi.
    """
    if x <= 0.0 or y <= 0.0 or z <= 0.0:
        raise PackingError("triangle_angle requires positive radii")
    a = x + y
    b = x + z
    c = y + z
    cosine = (a * a + b * b - c * c) / (2.0 * a * b)
    return math.acos(min(1.0, max(-1.0, cosine)))


def triangle_angle_center_derivative(x: float, y: float, z: float) -> float:
    """d/dx of triangle_angle(x, y, z); always negative."""
    if x <= 0.0 or y <= 0.0 or z <= 0.0:
        raise PackingError("triangle_angle requires positive radii")
    a = x + y
    b = x + z
    u = 1.0 - 2.0 * y * z / (a * b)          # cos of the angle
    du = 2.0 * y * z * (a + b) / (a * b) ** 2
    sin = math.sqrt(max(1.0 - u * u, 0.0))
    if sin == 0.0:
        return -math.inf
    return -du / sin


def angle_sum(radii, graph: PlanarEmbeddedGraph, vertex: int) -> float:
    """Total angle at an interior vertex over its ccw-consecutive neighbor pairs.

    Equals 2*pi exactly when the radii admit a flat packing around ``vertex``.
    """
    if graph.boundary[vertex - 1]:
        raise BoundaryVertexError(
            f"vertex {vertex} is on the boundary; its angle sum is not a 2*pi constraint"
        )
    radii = np.asarray(radii, dtype=float)
    rot = graph.rotation[vertex - 1]
    rv = float(radii[vertex - 1])
    total = 0.0
    for k, u in enumerate(rot):
        w = rot[(k + 1) % len(rot)]
        total += triangle_angle(rv, float(radii[u - 1]), float(radii[w - 1]))
    return total


def tangency_residual(packing: Packing, edge: tuple[int, int]) -> float:
    """|p_i - p_j|^2 - (r_i + r_j)^2 for one edge; zero at exact tangency."""
    i, j = edge
    n = packing.n
    if not (1 <= i <= n and 1 <= j <= n):
        raise PackingError(f"edge ({i},{j}) references unknown vertex")
    d = packing.centers[i - 1] - packing.centers[j - 1]
    rr = packing.radii[i - 1] + packing.radii[j - 1]
    return float(d @ d - rr * rr)


def validate_packing(graph: PlanarEmbeddedGraph, packing: Packing,
                     tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> list[Violation]:
    """All invariant violations of ``packing`` against ``graph``; empty if valid.

    Checks positive radii, relative tangency residual on every edge and the
    counterclockwise neighbor order at every vertex of degree >= 3 (cyclic
    rotations are equivalent, a reflected order is a violation).
    """
    if packing.n != graph.n:
        raise PackingError(
            f"packing has {packing.n} disks but graph has {graph.n} vertices"
        )
    violations = []
    for v in range(1, graph.n + 1):
        if packing.radii[v - 1] <= 0.0:
            violations.append(Violation("nonpositive_radius", (v,),
                                        f"disk {v} has radius {packing.radii[v - 1]}"))
    for e in graph.edges:
        res = tangency_residual(packing, e)
        scale = (packing.radii[e[0] - 1] + packing.radii[e[1] - 1]) ** 2
        if abs(res) > tol.tol_tangency * scale:
            violations.append(Violation(
                "tangency", e,
                f"edge {e} residual {res:.3e} exceeds {tol.tol_tangency:.1e} * (r_i+r_j)^2",
                abs(res) / scale))
    for v in range(1, graph.n + 1):
        rot = graph.rotation[v - 1]
        if len(rot) <= 2:
            continue  # degree <= 2: ccw order is vacuous
        angles = []
        for u in rot:
            d = packing.centers[u - 1] - packing.centers[v - 1]
            angles.append(math.atan2(d[1], d[0]))
        observed = tuple(u for _, u in sorted(zip(angles, rot)))
        if not _cyclic_equal(observed, rot):
            violations.append(Violation(
                "orientation", (v,),
                f"neighbors of {v} are embedded as {observed}, expected ccw {rot}"))
    return violations


def _cyclic_equal(a: tuple, b: tuple) -> bool:
    if len(a) != len(b):
        return False
    if len(a) == 0:
        return True
    try:
        k = a.index(b[0])
    except ValueError:
        return False
    return a[k:] + a[:k] == b
