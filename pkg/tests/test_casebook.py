import math

import numpy as np
import pytest

from packrigid.casebook import (
    ContourRangeError,
    GapAnalysis,
    UnknownCaseError,
    build_case,
    case_names,
    conjecture_ratio_root,
    gap_analysis,
    max_r5,
    max_r5_closed_form,
    min_r5,
    min_r5_closed_form,
    ratio_polynomial,
    ten_disk_parameters,
)
from packrigid.core import validate_packing
from packrigid.first_order import is_infinitesimally_rigid
from packrigid.layout import angle_residuals
from packrigid.linalg import cokernel_basis
from packrigid.matroid import is_independent, is_maximal
from packrigid.rigidity import build_extended_matrix, flex_space_report
from packrigid.second_order import second_order_analysis


def test_unknown_case():
    with pytest.raises(UnknownCaseError):
        build_case("nope")


def test_every_geometric_case_validates():
    for name in case_names():
        rec = build_case(name)
        if rec.packing is None:
            continue
        assert validate_packing(rec.graph, rec.packing) == []
        assert rec.facts["n"] == rec.graph.n
        assert rec.facts["m"] == rec.graph.m


def test_flower4_facts(flower4):
    g, pk, part = flower4
    rec = build_case("flower4")
    assert np.array_equal(pk.centers,
                          [[1, 1], [1, -1], [-1, -1], [-1, 1], [0, 0]])
    assert np.allclose(pk.radii, [1, 1, 1, 1, math.sqrt(2) - 1])
    assert g.edges == ((1, 2), (2, 3), (3, 4), (1, 4),
                       (1, 5), (2, 5), (3, 5), (4, 5))
    rep = flex_space_report(g, pk, part)
    assert rep.dim_kernel_R == rec.facts["kernel_R_dim"]
    assert rep.dim_kernel_Re == rec.facts["kernel_extended_dim"]
    Re = build_extended_matrix(g, pk, part)
    assert cokernel_basis(Re.matrix).shape[0] == rec.facts["cokernel_extended_dim"]
    verdict = is_infinitesimally_rigid(g, pk, part)
    assert verdict.rigid == rec.facts["infinitesimally_rigid"]
    ratio = verdict.stress.values[4] / verdict.stress.values[0]
    assert ratio == pytest.approx(rec.facts["stress_edge_ratio"], rel=1e-9)


def test_prestress10_facts(prestress10):
    g, pk, part = prestress10
    rec = build_case("prestress10")
    # boundary radii: unit disks next to the pocket, q elsewhere, s at 2/5
    q, s = ten_disk_parameters()
    assert rec.facts["q"] == q and rec.facts["s"] == s
    assert pk.radius(4) == pytest.approx(q, abs=1e-12)
    assert pk.radius(7) == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(angle_residuals(g, pk.radii))) < 1e-10
    rep = flex_space_report(g, pk, part)
    assert rep.dim_kernel_Re == rec.facts["kernel_extended_dim"]
    verdict = is_infinitesimally_rigid(g, pk, part)
    assert verdict.rigid == rec.facts["infinitesimally_rigid"] is False
    analysis = second_order_analysis(g, pk, part)
    assert (analysis.status == "prestress_stable") == rec.facts["prestress_stable"]
    swapped = second_order_analysis(g, pk, part.swap_signs())
    assert (swapped.status == "not_second_order_rigid") == rec.facts["swap_makes_extendable"]


def test_general10_green_set_is_first_order_rigid_but_packing_flexes(general10):
    g, pk, part = general10
    rec = build_case("general10")
    green = rec.facts["green_set"]
    assert part.fixed == green
    assert is_independent(g, pk, green) == rec.facts["green_independent"]
    assert is_maximal(g, pk, green) == rec.facts["green_maximal"]
    assert is_independent(g, pk, green + (7,)) == rec.facts["green_plus_7_independent"]
    assert is_independent(g, pk, green + (1,)) == rec.facts["green_plus_1_independent"]
    assert is_maximal(g, pk, green + (1,)) == rec.facts["green_plus_1_maximal"]
    # adding the fixing row for the determined disk does not shrink the kernel
    from packrigid.linalg import numerical_rank
    from packrigid.rigidity import build_fixing_rows, build_rigidity_matrix
    R = build_rigidity_matrix(g, pk).matrix
    with_green = np.vstack([R, build_fixing_rows(green, g.n)])
    with_seven = np.vstack([R, build_fixing_rows(green + (7,), g.n)])
    assert numerical_rank(with_green) == numerical_rank(with_seven)
    verdict = is_infinitesimally_rigid(g, pk, part)
    assert verdict.rigid is False
    assert verdict.counterexample_flex is not None


def test_prestress15_facts(prestress15):
    g, pk, part = prestress15
    rec = build_case("prestress15")
    assert g.n == 15 and g.m == 33
    assert sum(g.boundary) == rec.facts["boundary_count"]
    for v in (4, 5, 6):
        assert pk.radius(v) == pytest.approx(rec.facts["valley_radius"], abs=1e-12)
    rep = flex_space_report(g, pk, part)
    assert rep.dim_kernel_R == rec.facts["kernel_R_dim"]
    assert rep.dim_kernel_Re == rec.facts["kernel_extended_dim"]
    analysis = second_order_analysis(g, pk, part)
    assert analysis.prestress_stable == rec.facts["prestress_stable"]


def test_sumr27_counts():
    rec = build_case("sumr27")
    assert rec.facts["n"] == 27
    assert rec.facts["m"] == 61
    assert rec.facts["max_independent_size"] == 17
    assert 3 * rec.facts["n"] - rec.facts["m"] - 3 == 17


def test_symmetric_point_reduces_both_contours():
    q, s = ten_disk_parameters()
    assert min_r5(q, s) == pytest.approx(s, abs=1e-9)
    assert max_r5(q, s) == pytest.approx(s, abs=1e-9)


def test_bisection_matches_closed_form(rng):
    q0, s0 = ten_disk_parameters()
    for _ in range(20):
        q = float(rng.uniform(0.6, 0.8))
        r2 = float(rng.uniform(0.8, 1.2))
        assert min_r5(q, r2) == pytest.approx(min_r5_closed_form(q, r2), abs=1e-9)
        assert max_r5(q, r2) == pytest.approx(max_r5_closed_form(q, r2), abs=1e-9)


def test_contour_no_root_reported():
    with pytest.raises(ContourRangeError):
        min_r5(0.05, 5.0)


def test_gap_analysis_certifies_isolation():
    q, s = ten_disk_parameters()
    ga = gap_analysis(q, (s - 0.15, s + 0.15))
    assert isinstance(ga, GapAnalysis)
    assert abs(ga.gap) < 1e-6
    assert abs(ga.first_derivative) < 1e-4
    assert ga.second_derivative > 0
    for offset in (-0.05, 0.05):
        r2 = ga.r2_star + offset
        assert min_r5(q, r2) - max_r5(q, r2) > 0
    # plugging the solved symmetric radii into both contours closes them
    assert min_r5(q, s) - s == pytest.approx(0.0, abs=1e-9)
    assert max_r5(q, s) - s == pytest.approx(0.0, abs=1e-9)


def test_gap_requires_interior_minimum():
    q, s = ten_disk_parameters()
    with pytest.raises(ContourRangeError):
        gap_analysis(q, (s + 0.02, s + 0.1))


def test_conjecture_ratio_root():
    root = conjecture_ratio_root()
    assert 0.650 < root < 0.652
    assert abs(ratio_polynomial(root)) < 1e-12
    # exactly one sign change on a fine grid over the bracket
    xs = np.linspace(0.6, 0.7, 2001)
    signs = np.sign([ratio_polynomial(float(x)) for x in xs])
    changes = int(np.sum(signs[:-1] * signs[1:] < 0))
    assert changes == 1
