"""Line-oriented text format for packings.

    packing 1
    # comment
    disk <id> <x> <y> <r> <tag> <boundary-flag>
    rot <id> <ccw neighbor ids...>

One ``disk`` line per vertex (ids dense 1..n, tag in {+,-,=,0}, boundary
flag 0 or 1) and one ``rot`` line per vertex.  Edges are implied by the
rotations and must be symmetric.  Numbers are written with shortest
round-trip precision, so serialize(parse(serialize(x))) is byte-identical.
"""

from __future__ import annotations

import numpy as np

from .core import (
    ConstraintPartition,
    Packing,
    PackingError,
    PlanarEmbeddedGraph,
)

FORMAT_VERSION = 1


class ParseError(PackingError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def serialize(graph: PlanarEmbeddedGraph, packing: Packing,
              partition: ConstraintPartition) -> str:
    if packing.n != graph.n or len(partition.tags) != graph.n:
        raise PackingError("graph, packing and partition sizes differ")
    lines = [f"packing {FORMAT_VERSION}"]
    for v in range(1, graph.n + 1):
        x, y = (float(c) for c in packing.centers[v - 1])
        lines.append(
            f"disk {v} {x!r} {y!r} {float(packing.radii[v - 1])!r} "
            f"{partition.tags[v - 1].value} {int(graph.boundary[v - 1])}")
    for v in range(1, graph.n + 1):
        rot = " ".join(str(u) for u in graph.rotation[v - 1])
        lines.append(f"rot {v} {rot}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> tuple[PlanarEmbeddedGraph, Packing, ConstraintPartition]:
    disks: dict[int, tuple] = {}
    rots: dict[int, list[int]] = {}
    disk_lines: dict[int, int] = {}
    rot_lines: dict[int, int] = {}
    version_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if not version_seen:
            if fields[0] != "packing" or len(fields) != 2:
                raise ParseError(lineno, "expected header 'packing <version>'")
            if fields[1] != str(FORMAT_VERSION):
                raise ParseError(lineno, f"unsupported format version {fields[1]}")
            version_seen = True
            continue
        if fields[0] == "disk":
            if len(fields) != 7:
                raise ParseError(lineno, "disk line needs: id x y r tag boundary")
            try:
                v = int(fields[1])
                x, y, r = float(fields[2]), float(fields[3]), float(fields[4])
            except ValueError as exc:
                raise ParseError(lineno, f"bad number: {exc}") from None
            if fields[5] not in ("+", "-", "=", "0"):
                raise ParseError(lineno, f"unknown tag {fields[5]!r}")
            if fields[6] not in ("0", "1"):
                raise ParseError(lineno, "boundary flag must be 0 or 1")
            if r <= 0.0:
                raise ParseError(lineno, f"disk {v} has non-positive radius {r!r}")
            if v in disks:
                raise ParseError(lineno, f"disk {v} defined twice")
            disks[v] = (x, y, r, fields[5], fields[6] == "1")
            disk_lines[v] = lineno
        elif fields[0] == "rot":
            if len(fields) < 3:
                raise ParseError(lineno, "rot line needs: id and at least one neighbor")
            try:
                v = int(fields[1])
                nbrs = [int(u) for u in fields[2:]]
            except ValueError as exc:
                raise ParseError(lineno, f"bad vertex id: {exc}") from None
            if v in rots:
                raise ParseError(lineno, f"rotation of {v} defined twice")
            if len(set(nbrs)) != len(nbrs):
                raise ParseError(lineno, f"rotation of {v} repeats a neighbor")
            if v in nbrs:
                raise ParseError(lineno, f"rotation of {v} contains itself")
            rots[v] = nbrs
            rot_lines[v] = lineno
        else:
            raise ParseError(lineno, f"unknown directive {fields[0]!r}")
    if not version_seen:
        raise ParseError(1, "empty document")
    if not disks:
        raise ParseError(1, "no disk lines")
    n = max(disks)
    if sorted(disks) != list(range(1, n + 1)):
        missing = sorted(set(range(1, n + 1)) - set(disks))
        raise ParseError(1, f"disk ids must be dense 1..n; missing {missing}")
    if sorted(rots) != list(range(1, n + 1)):
        missing = sorted(set(range(1, n + 1)) - set(rots))
        raise ParseError(1, f"missing rot line(s) for {missing}")
    for v, nbrs in rots.items():
        for u in nbrs:
            if not 1 <= u <= n:
                raise ParseError(rot_lines[v], f"rotation of {v} names unknown vertex {u}")
            if v not in rots[u]:
                raise ParseError(
                    rot_lines[v],
                    f"edge ({v},{u}) appears in the rotation of {v} only")
    try:
        graph = PlanarEmbeddedGraph.from_rotations(
            rots, {v for v, d in disks.items() if d[4]})
    except PackingError as exc:
        raise ParseError(1, str(exc)) from None
    centers = np.array([[disks[v][0], disks[v][1]] for v in range(1, n + 1)])
    radii = np.array([disks[v][2] for v in range(1, n + 1)])
    packing = Packing(centers, radii)
    partition = ConstraintPartition.from_symbols(
        [disks[v][3] for v in range(1, n + 1)])
    return graph, packing, partition
