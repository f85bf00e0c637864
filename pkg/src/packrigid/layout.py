"""Layout of simple triangulated disks from prescribed boundary radii.

Interior radii are driven to their unique values by the monotone angle-sum
iteration (compiled kernel when available), then centers are placed face by
face from the rotation system.  Also provides the graph families used to
generate randomized instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import (
    AnalysisTolerances,
    DEFAULT_TOLERANCES,
    Packing,
    PackingError,
    PlanarEmbeddedGraph,
    triangle_angle,
    validate_packing,
)


class LayoutError(PackingError):
    """Layout preconditions violated or placement inconsistent."""


class ConvergenceError(LayoutError):
    """Angle-sum iteration did not reach the tolerance within max_iter."""

    def __init__(self, worst_residual: float, max_iter: int):
        self.worst_residual = worst_residual
        super().__init__(
            f"radius iteration stalled at residual {worst_residual:.3e} "
            f"after {max_iter} sweeps")


@dataclass(frozen=True)
class SimpleTriangulationCheck:
    simple: bool
    boundary_count: int
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.simple


@dataclass(frozen=True)
class LayoutProblem:
    """A simple triangulated disk plus one prescribed radius per boundary vertex."""

    graph: PlanarEmbeddedGraph
    boundary_radii: dict[int, float]
    max_iter: int = 20000
    tol_angle: float = 1e-12

    def __post_init__(self):
        check = is_simple_triangulated(self.graph)
        if not check.simple:
            raise LayoutError(f"graph is not a simple triangulated disk: {check.reason}")
        expected = set(self.graph.boundary_vertices())
        if set(self.boundary_radii) != expected:
            raise LayoutError("boundary_radii must cover exactly the boundary vertices")
        for v, r in self.boundary_radii.items():
            if r <= 0.0:
                raise LayoutError(f"boundary radius of vertex {v} must be positive")


def is_simple_triangulated(graph: PlanarEmbeddedGraph) -> SimpleTriangulationCheck:
    """Triangulated disk with edge-connected interior that supports every
    boundary disk."""
    b = sum(graph.boundary)
    interior = graph.interior_vertices()
    if not interior:
        return SimpleTriangulationCheck(False, b, "no interior vertices")
    if b < 3:
        return SimpleTriangulationCheck(False, b, "boundary must be a cycle of length >= 3")
    try:
        faces = graph.interior_faces()
    except PackingError as exc:
        return SimpleTriangulationCheck(False, b, str(exc))
    for f in faces:
        if len(f) != 3:
            return SimpleTriangulationCheck(False, b, f"non-triangular interior face {f}")
    interior_set = set(interior)
    seen = {interior[0]}
    stack = [interior[0]]
    while stack:
        v = stack.pop()
        for u in graph.neighbors(v):
            if u in interior_set and u not in seen:
                seen.add(u)
                stack.append(u)
    if len(seen) != len(interior):
        return SimpleTriangulationCheck(False, b, "interior vertices are not edge connected")
    for v in graph.boundary_vertices():
        if not any(u in interior_set for u in graph.neighbors(v)):
            return SimpleTriangulationCheck(False, b, f"boundary vertex {v} has no interior neighbor")
    return SimpleTriangulationCheck(True, b)


def _interior_csr(graph: PlanarEmbeddedGraph):
    interior = [v - 1 for v in graph.interior_vertices()]
    flat = []
    off = [0]
    for v0 in interior:
        flat.extend(u - 1 for u in graph.rotation[v0])
        off.append(len(flat))
    return (np.asarray(interior, dtype=np.intp),
            np.asarray(flat, dtype=np.intp),
            np.asarray(off, dtype=np.intp))


def solve_interior_radii(problem: LayoutProblem,
                         initial: dict[int, float] | None = None) -> np.ndarray:
    """Radii for all vertices with every interior angle sum within tol_angle
    of 2*pi; boundary radii are returned unchanged.

    The solution is unique, so ``initial`` only affects the iteration path.
    Interior radii start at the mean boundary radius unless given.
    """
    graph = problem.graph
    radii = np.zeros(graph.n)
    for v, r in problem.boundary_radii.items():
        radii[v - 1] = r
    rbar = float(np.mean(list(problem.boundary_radii.values())))
    for v in graph.interior_vertices():
        radii[v - 1] = rbar if initial is None else initial[v]
    interior, flat, off = _interior_csr(graph)
    solved, worst, _ = _kernels.solve_radii(radii, interior, flat, off,
                                            problem.tol_angle, problem.max_iter)
    if worst >= problem.tol_angle:
        raise ConvergenceError(worst, problem.max_iter)
    return solved


def angle_residuals(graph: PlanarEmbeddedGraph, radii) -> np.ndarray:
    """angle_sum - 2*pi at every interior vertex (in interior_vertices order)."""
    interior, flat, off = _interior_csr(graph)
    # fresh writable copy: the compiled kernel takes plain double buffers
    return _kernels.angle_residuals(np.array(radii, dtype=float), interior, flat, off)


def place_centers(graph: PlanarEmbeddedGraph, radii,
                  tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Realize the packing: vertex 1 at the origin, its first rotation
    neighbor on the positive x axis, every other center reached through
    shared triangles.  Raises if face placements disagree beyond the
    tangency tolerance (radii not converged) or if the result fails
    validation."""
    radii = np.asarray(radii, dtype=float)
    if radii.shape[0] != graph.n:
        raise LayoutError("radii length must equal the vertex count")
    third = {}
    for f in graph.interior_faces():
        if len(f) != 3:
            raise LayoutError(f"non-triangular interior face {f}")
        a, b, c = f
        third[(a, b)] = c
        third[(b, c)] = a
        third[(c, a)] = b

    centers = np.full((graph.n, 2), np.nan)
    pos = {}

    def place(v, xy):
        if v in pos:
            d = math.hypot(pos[v][0] - xy[0], pos[v][1] - xy[1])
            scale = radii[v - 1]
            if d > math.sqrt(tol.tol_tangency) * scale:
                raise LayoutError(
                    f"placement of vertex {v} is inconsistent by {d:.3e} "
                    "(interior radii not converged?)")
            return
        pos[v] = xy

    v0 = 1
    u0 = graph.rotation[0][0]
    place(v0, (0.0, 0.0))
    place(u0, (radii[v0 - 1] + radii[u0 - 1], 0.0))
    queue = [(v0, u0), (u0, v0)]
    done = set()
    while queue:
        u, v = queue.pop()
        if (u, v) in done or (u, v) not in third:
            continue
        done.add((u, v))
        w = third[(u, v)]
        pu, pv = pos[u], pos[v]
        theta = math.atan2(pv[1] - pu[1], pv[0] - pu[0])
        ang = triangle_angle(radii[u - 1], radii[v - 1], radii[w - 1])
        dist = radii[u - 1] + radii[w - 1]
        place(w, (pu[0] + dist * math.cos(theta + ang),
                  pu[1] + dist * math.sin(theta + ang)))
        queue.extend([(u, w), (w, v), (v, w), (w, u)])
    if len(pos) != graph.n:
        raise LayoutError("placement did not reach every vertex")
    for v, xy in pos.items():
        centers[v - 1] = xy
    packing = Packing(centers, radii)
    violations = validate_packing(graph, packing, tol)
    if violations:
        raise LayoutError(
            f"placed packing fails validation ({len(violations)} violation(s), "
            f"first: {violations[0].detail})")
    return centers


def solve_layout(problem: LayoutProblem,
                 tol: AnalysisTolerances = DEFAULT_TOLERANCES) -> Packing:
    """solve_interior_radii followed by place_centers."""
    radii = solve_interior_radii(problem)
    centers = place_centers(problem.graph, radii, tol)
    return Packing(centers, radii)


def monotonicity_probe(problem: LayoutProblem, boundary_vertex: int,
                       delta: float) -> dict[int, float]:
    """Interior radius changes caused by growing one boundary radius by delta.

    Boundary radii determine interior radii monotonically, so for delta > 0
    every returned change is >= 0 (up to solver tolerance).
    """
    if boundary_vertex not in problem.boundary_radii:
        raise LayoutError(f"vertex {boundary_vertex} is not a boundary vertex")
    base = solve_interior_radii(problem)
    bumped_radii = dict(problem.boundary_radii)
    bumped_radii[boundary_vertex] = bumped_radii[boundary_vertex] + delta
    bumped_problem = LayoutProblem(problem.graph, bumped_radii,
                                   problem.max_iter, problem.tol_angle)
    bumped = solve_interior_radii(bumped_problem)
    return {v: float(bumped[v - 1] - base[v - 1])
            for v in problem.graph.interior_vertices()}


# -- graph families for instance generation ---------------------------------

def wheel_graph(k: int) -> PlanarEmbeddedGraph:
    """Flower: boundary ring 1..k (counterclockwise) around center k+1."""
    if k < 3:
        raise LayoutError("wheel needs a ring of at least 3")
    c = k + 1
    rot = {}
    for i in range(1, k + 1):
        nxt = i % k + 1
        prv = (i - 2) % k + 1
        rot[i] = [nxt, c, prv]
    rot[c] = list(range(1, k + 1))
    return PlanarEmbeddedGraph.from_rotations(rot, set(range(1, k + 1)))


def stack_face(graph: PlanarEmbeddedGraph, face: tuple[int, int, int]) -> PlanarEmbeddedGraph:
    """Subdivide one interior triangle with a new interior vertex joined to
    its three corners."""
    if face not in graph.interior_faces():
        raise LayoutError(f"{face} is not an interior face")
    a, b, c = face
    v = graph.n + 1
    rot = {u: list(graph.rotation[u - 1]) for u in range(1, graph.n + 1)}

    def insert_between(host, after, before):
        lst = rot[host]
        k = lst.index(after)
        if lst[(k + 1) % len(lst)] != before:
            raise LayoutError(f"face corner {host}: {before} does not follow {after}")
        lst.insert(k + 1, v)

    # ccw face (a, b, c): at a the wedge runs from b to c, etc.
    insert_between(a, b, c)
    insert_between(b, c, a)
    insert_between(c, a, b)
    rot[v] = [a, b, c]
    boundary = {u for u in range(1, graph.n + 1) if graph.boundary[u - 1]}
    edge_order = list(graph.edges) + [tuple(sorted((v, u))) for u in (a, b, c)]
    return PlanarEmbeddedGraph.from_rotations(rot, boundary, edge_order)


def random_triangulated_disk(rng: np.random.Generator, ring: int | None = None,
                             stacked: int | None = None) -> PlanarEmbeddedGraph:
    """Wheel with a random number of stacked interior vertices."""
    if ring is None:
        ring = int(rng.integers(4, 9))
    if stacked is None:
        stacked = int(rng.integers(0, 6))
    g = wheel_graph(ring)
    for _ in range(stacked):
        faces = g.interior_faces()
        g = stack_face(g, faces[int(rng.integers(0, len(faces)))])
    return g


def random_layout_problem(rng: np.random.Generator, ring: int | None = None,
                          stacked: int | None = None,
                          radius_span: float = 2.0) -> LayoutProblem:
    g = random_triangulated_disk(rng, ring, stacked)
    radii = {v: float(np.exp(rng.uniform(-np.log(radius_span), np.log(radius_span))))
             for v in g.boundary_vertices()}
    return LayoutProblem(g, radii)
