"""Executable catalog of worked instances and their expected analysis facts.

Geometric cases ("flower4", "prestress10", "general10", "prestress15")
construct a graph, packing and coloring; scalar cases ("sumr27",
"fernique_ratio") carry only numeric facts.  Colors follow the usual
convention: shrink-only disks blue (-), grow-only red (+), pinned green (=),
free gray (0).

Also hosts the closed-form analysis of the ten-disk configuration: the two
contours bounding the radius of disk 5 given disk 2 (each contour is one
interior angle-sum equation with the remaining disks held), and the gap
between them whose unique non-positive point certifies the configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .core import (
    ConstraintPartition,
    Packing,
    PackingError,
    PlanarEmbeddedGraph,
    triangle_angle,
)
from .layout import LayoutProblem, solve_layout

TWO_PI = 2.0 * math.pi

SQRT2 = math.sqrt(2.0)


class UnknownCaseError(PackingError):
    pass


class ContourRangeError(PackingError):
    """The contour equation has no root for these parameters."""


@dataclass(frozen=True)
class CaseRecord:
    name: str
    description: str
    graph: PlanarEmbeddedGraph | None
    packing: Packing | None
    partition: ConstraintPartition | None
    facts: dict
    fact_basis: dict = field(default_factory=dict)


def case_names() -> tuple[str, ...]:
    return ("flower4", "prestress10", "general10", "prestress15",
            "sumr27", "fernique_ratio")


# -- the 4-flower ------------------------------------------------------------

FLOWER4_ROTATIONS = {1: [4, 5, 2], 2: [1, 5, 3], 3: [2, 5, 4],
                     4: [3, 5, 1], 5: [1, 4, 3, 2]}
FLOWER4_EDGE_ORDER = [(1, 2), (2, 3), (3, 4), (1, 4),
                      (1, 5), (2, 5), (3, 5), (4, 5)]


def _flower4() -> CaseRecord:
    graph = PlanarEmbeddedGraph.from_rotations(
        FLOWER4_ROTATIONS, {1, 2, 3, 4}, FLOWER4_EDGE_ORDER)
    packing = Packing(
        np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, -1.0], [-1.0, 1.0], [0.0, 0.0]]),
        np.array([1.0, 1.0, 1.0, 1.0, SQRT2 - 1.0]))
    partition = ConstraintPartition.from_symbols("----+")
    facts = {
        "n": 5, "m": 8,
        "kernel_R_dim": 7,
        "kernel_extended_dim": 3,
        "cokernel_extended_dim": 1,
        "infinitesimally_rigid": True,
        "stress_edge_ratio": -2.0,       # spoke stress over ring stress
        "max_independent_size": 4,
    }
    basis = {
        "kernel_extended_dim": "rank of the 13x15 matrix",
        "stress_edge_ratio": "force balance at a ring disk",
        "max_independent_size": "3n - m - 3",
    }
    return CaseRecord("flower4", "four unit disks around a sqrt(2)-1 center",
                      graph, packing, partition, facts, basis)


# -- the symmetric ten-disk configuration ------------------------------------

TEN_DISK_ROTATIONS = {
    1: [2, 4, 3],
    2: [4, 1, 10, 7],
    3: [1, 4, 5],
    4: [7, 5, 3, 1, 2],
    5: [3, 4, 7, 6],
    6: [5, 7, 8],
    7: [4, 2, 10, 9, 8, 6, 5],
    8: [6, 7, 9],
    9: [8, 7, 10],
    10: [7, 2, 9],
}
TEN_DISK_BOUNDARY = {1, 2, 3, 5, 6, 8, 9, 10}


def ten_disk_graph() -> PlanarEmbeddedGraph:
    return PlanarEmbeddedGraph.from_rotations(TEN_DISK_ROTATIONS, TEN_DISK_BOUNDARY)


@lru_cache(maxsize=1)
def ten_disk_parameters() -> tuple[float, float]:
    """(q, s): interior radius of disk 4 and the common radius of disks 2, 5
    at the reflection-symmetric configuration.

    Both interior angle sums are 2*pi simultaneously:
        sum at disk 4:  a(q,1,1) + 4 a(q,s,1)   = 2 pi
        sum at disk 7:  3 a(1,q,q) + 4 a(1,q,s) = 2 pi
    Each equation is linear in s once the target angle is known, so the
    system reduces to a one-dimensional root find in q.
    """

    def s_low(q):
        t = (TWO_PI - triangle_angle(q, 1.0, 1.0)) / 4.0
        ct = math.cos(t)
        return q * (q + 1) * (1 - ct) / (ct * (q + 1) - q + 1)

    def s_high(q):
        t = (TWO_PI - 3.0 * triangle_angle(1.0, q, q)) / 4.0
        ct = math.cos(t)
        return (1 + q) * (1 - ct) / (ct * (1 + q) - 1 + q)

    lo, hi = 0.6, 0.8
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if s_low(mid) - s_high(mid) < 0:
            lo = mid
        else:
            hi = mid
    q = 0.5 * (lo + hi)
    return q, s_low(q)


def _ten_disk_packing() -> Packing:
    q, s = ten_disk_parameters()
    boundary = {1: 1.0, 3: 1.0, 2: s, 5: s, 6: q, 8: q, 9: q, 10: q}
    return solve_layout(LayoutProblem(ten_disk_graph(), boundary, tol_angle=1e-13))


def _prestress10() -> CaseRecord:
    q, s = ten_disk_parameters()
    graph = ten_disk_graph()
    packing = _ten_disk_packing()
    partition = ConstraintPartition.from_symbols("-0-+0+-+++")
    facts = {
        "n": 10, "m": 19, "boundary_count": 8,
        "q": q, "s": s,
        "kernel_R_dim": 11,
        "kernel_extended_dim": 4,
        "cokernel_extended_dim": 1,
        "infinitesimally_rigid": False,
        "flex_grow_disk": 2, "flex_shrink_disk": 5,
        "prestress_stable": True,
        "swap_makes_extendable": True,
    }
    basis = {
        "q": "simultaneous solve of both interior angle sums",
        "kernel_extended_dim": "reflection symmetry ties disks 2 and 5",
        "prestress_stable": "blocking stress over the refined coloring",
    }
    return CaseRecord(
        "prestress10",
        "reflection-symmetric ten-disk packing, flexible to first order but rigid",
        graph, packing, partition, facts, basis)


def _general10() -> CaseRecord:
    graph = ten_disk_graph()
    packing = _ten_disk_packing()
    partition = ConstraintPartition.from_symbols("0=0===0===")
    green = (2, 4, 5, 6, 8, 9, 10)
    facts = {
        "n": 10, "m": 19,
        "green_set": green,
        "green_independent": True,
        "green_maximal": False,
        "green_plus_7_independent": False,
        "green_determines_disk": 7,
        "green_plus_1_independent": True,
        "green_plus_1_maximal": True,
        "infinitesimally_rigid": False,
        "max_independent_size": 8,
    }
    basis = {
        "green_determines_disk": "all tangent neighbors of disk 7 are green",
        "max_independent_size": "3n - m - 3",
    }
    return CaseRecord("general10",
                      "ten-disk packing with a green independent set pinning disk 7",
                      graph, packing, partition, facts, basis)


# -- the three-fold fifteen-disk configuration --------------------------------

FIFTEEN_DISK_ROTATIONS = {
    1: [8, 7, 4, 2, 3, 6, 13],
    2: [11, 10, 5, 3, 1, 4, 9],
    3: [14, 15, 6, 1, 2, 5, 12],
    4: [1, 7, 9, 2],
    5: [2, 10, 12, 3],
    6: [3, 15, 13, 1],
    7: [9, 4, 1, 8],
    8: [7, 1, 13],
    9: [4, 7, 11, 2],
    10: [12, 5, 2, 11],
    11: [10, 2, 9],
    12: [5, 10, 14, 3],
    13: [6, 15, 8, 1],
    14: [15, 3, 12],
    15: [13, 6, 3, 14],
}
FIFTEEN_DISK_BOUNDARY = {7, 8, 9, 10, 11, 12, 13, 14, 15}


def _prestress15() -> CaseRecord:
    graph = PlanarEmbeddedGraph.from_rotations(
        FIFTEEN_DISK_ROTATIONS, FIFTEEN_DISK_BOUNDARY)
    boundary = {v: 1.0 for v in FIFTEEN_DISK_BOUNDARY}
    packing = solve_layout(LayoutProblem(graph, boundary, tol_angle=1e-13))
    # interior: three mutually tangent unit disks 1..3 with sqrt(2)-1 valley
    # disks 4..6; boundary alternates tops {8,11,14} and the gray pairs
    partition = ConstraintPartition.from_symbols("---+++0+0" + "0+00+0")
    facts = {
        "n": 15, "m": 33, "boundary_count": 9,
        "valley_radius": SQRT2 - 1.0,
        "kernel_R_dim": 12,
        "kernel_extended_dim": 4,
        "infinitesimally_rigid": False,
        "flex_grow_orbit": (7, 10, 15),
        "flex_shrink_orbit": (9, 12, 13),
        "prestress_stable": True,
        "swap_makes_extendable": True,
    }
    basis = {
        "valley_radius": "four-disk angle identity at the valley",
        "kernel_extended_dim": "three mirror symmetries tie the gray pairs",
        "prestress_stable": "blocking stress over the refined coloring",
    }
    return CaseRecord(
        "prestress15",
        "three-fold symmetric fifteen-disk packing with one blocked flex orbit pair",
        graph, packing, partition, facts, basis)


def _sumr27() -> CaseRecord:
    facts = {"n": 27, "m": 61, "max_independent_size": 3 * 27 - 61 - 3}
    return CaseRecord("sumr27",
                      "combinatorial counts of the radius-sum optimum "
                      "(geometry not constructed)",
                      None, None, None, facts,
                      {"max_independent_size": "3n - m - 3"})


RATIO_POLY = (89.0, 1344.0, 4008.0, -464.0, -2410.0, 176.0, 296.0, -96.0, 1.0)
# coefficients from degree 8 down to the constant term


def _fernique_ratio() -> CaseRecord:
    root = conjecture_ratio_root()
    facts = {"root": root, "bracket": (0.650, 0.652)}
    return CaseRecord("fernique_ratio",
                      "extreme small-to-large radius ratio (scalar case)",
                      None, None, None, facts,
                      {"root": "sign-bracketed root of the degree-8 polynomial"})


_BUILDERS = {
    "flower4": _flower4,
    "prestress10": _prestress10,
    "general10": _general10,
    "prestress15": _prestress15,
    "sumr27": _sumr27,
    "fernique_ratio": _fernique_ratio,
}


def build_case(name: str) -> CaseRecord:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise UnknownCaseError(
            f"unknown case {name!r}; known: {', '.join(case_names())}") from None
    return builder()


# -- contour analysis of the ten-disk configuration ---------------------------

def _bisect_increasing(f, target, lo, hi, iters=200):
    flo, fhi = f(lo), f(hi)
    if not (flo <= target <= fhi):
        raise ContourRangeError(
            f"no root: target {target:.6f} outside [{flo:.6f}, {fhi:.6f}]")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def min_r5(q: float, r2: float, tol: float = 1e-12) -> float:
    """Smallest admissible radius of disk 5 given disk 2: the angle sum
    around disk 4 (radius q, unit neighbors held) must close to 2*pi.
    Solved by bisection; monotone increasing in r5."""
    if q <= 0 or r2 <= 0:
        raise PackingError("radii must be positive")
    fixed = triangle_angle(q, 1.0, 1.0) + 2.0 * triangle_angle(q, r2, 1.0)

    def f(r5):
        return fixed + 2.0 * triangle_angle(q, r5, 1.0)

    return _bisect_increasing(f, TWO_PI, 1e-9, 1e9)


def max_r5(q: float, r2: float, tol: float = 1e-12) -> float:
    """Largest admissible radius of disk 5 given disk 2: the angle sum
    around the unit disk 7 (its q-sized neighbors held) must close to
    2*pi."""
    if q <= 0 or r2 <= 0:
        raise PackingError("radii must be positive")
    fixed = 3.0 * triangle_angle(1.0, q, q) + 2.0 * triangle_angle(1.0, q, r2)

    def f(r5):
        return fixed + 2.0 * triangle_angle(1.0, q, r5)

    return _bisect_increasing(f, TWO_PI, 1e-9, 1e9)


def min_r5_closed_form(q: float, r2: float) -> float:
    """Closed form of min_r5 obtained by inverting the angle equation."""
    a = math.acos((q * q + 2 * q - 1) / (q + 1) ** 2)
    b = math.acos(((q - 1) * r2 + q * (q + 1)) / ((q + 1) * (q + r2)))
    theta = 0.5 * a + b
    return (-2 * q * (q + 1) * math.cos(0.25 * (a + 2 * b)) ** 2
            / ((q + 1) * math.cos(theta) + q - 1))


def max_r5_closed_form(q: float, r2: float) -> float:
    """Closed form of max_r5 obtained by inverting the angle equation."""
    a = math.acos((-q * q + 2 * q + 1) / (q + 1) ** 2)
    b = math.acos((q * (-r2) + q + r2 + 1) / (q * r2 + q + r2 + 1))
    theta = 1.5 * a + b
    return (-2 * (q + 1) * math.cos(0.25 * (3 * a + 2 * b)) ** 2
            / ((q + 1) * math.cos(theta) - q + 1))


@dataclass(frozen=True)
class GapAnalysis:
    r2_star: float
    gap: float
    first_derivative: float
    second_derivative: float


def gap_analysis(q: float, r2_range: tuple[float, float],
                 tol: float = 1e-12) -> GapAnalysis:
    """Locate the interior minimizer of gap(r2) = min_r5 - max_r5 and report
    central-difference derivatives there (step 1e-4 * r2_star).

    A nonnegative gap with a single interior zero of second order certifies
    that the symmetric configuration admits no neighboring configuration.
    """
    lo, hi = r2_range
    if not (0 < lo < hi):
        raise PackingError("invalid r2 range")

    def gap(r2):
        return min_r5(q, r2, tol) - max_r5(q, r2, tol)

    grid = np.linspace(lo, hi, 101)
    values = [gap(x) for x in grid]
    k = int(np.argmin(values))
    if k in (0, len(grid) - 1):
        raise ContourRangeError("gap has no interior minimum in the given range")
    a, b = grid[k - 1], grid[k + 1]
    for _ in range(120):
        m1 = a + (b - a) / 3
        m2 = b - (b - a) / 3
        if gap(m1) < gap(m2):
            b = m2
        else:
            a = m1
    r2_star = 0.5 * (a + b)
    g0 = gap(r2_star)
    h = 1e-4 * r2_star
    gp = gap(r2_star + h)
    gm = gap(r2_star - h)
    return GapAnalysis(r2_star, g0, (gp - gm) / (2 * h), (gp - 2 * g0 + gm) / (h * h))


def ratio_polynomial(x: float) -> float:
    acc = 0.0
    for c in RATIO_POLY:
        acc = acc * x + c
    return acc


def conjecture_ratio_root(tol: float = 1e-12) -> float:
    """The real root of the degree-8 ratio polynomial in (0.6, 0.7), by
    bisection; the bracket is sign-verified."""
    lo, hi = 0.6, 0.7
    flo, fhi = ratio_polynomial(lo), ratio_polynomial(hi)
    if flo == 0.0:
        return lo
    if flo * fhi >= 0:
        raise PackingError("root bracket is not sign-changing")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ratio_polynomial(mid) * flo > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
