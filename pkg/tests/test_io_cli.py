import numpy as np
import pytest

from packrigid.casebook import build_case, case_names
from packrigid.cli import cli_run
from packrigid.io import ParseError, parse, serialize
from packrigid.svg import export_svg


GEOMETRIC = [n for n in case_names() if build_case(n).packing is not None]


@pytest.mark.parametrize("name", GEOMETRIC)
def test_round_trip_is_byte_stable(name):
    rec = build_case(name)
    doc = serialize(rec.graph, rec.packing, rec.partition)
    g, pk, part = parse(doc)
    assert g.n == rec.graph.n
    assert set(g.edges) == set(rec.graph.edges)
    assert g.rotation == rec.graph.rotation
    assert g.boundary == rec.graph.boundary
    assert np.array_equal(pk.centers, rec.packing.centers)
    assert np.array_equal(pk.radii, rec.packing.radii)
    assert part.tags == rec.partition.tags
    assert serialize(g, pk, part) == doc


def test_parse_rejects_one_sided_edge():
    doc = ("packing 1\n"
           "disk 1 0.0 0.0 1.0 0 1\n"
           "disk 2 2.0 0.0 1.0 0 1\n"
           "rot 1 2\n"
           "rot 2\n")
    with pytest.raises(ParseError):
        parse(doc)
    doc2 = ("packing 1\n"
            "disk 1 0.0 0.0 1.0 0 1\n"
            "disk 2 2.0 0.0 1.0 0 1\n"
            "disk 3 4.0 0.0 1.0 0 1\n"
            "rot 1 2\n"
            "rot 2 1 3\n"
            "rot 3 1\n")
    with pytest.raises(ParseError) as err:
        parse(doc2)
    assert "rotation" in str(err.value) or "edge" in str(err.value)


def test_parse_rejects_nonpositive_radius():
    doc = ("packing 1\n"
           "disk 1 0.0 0.0 0.0 0 1\n"
           "rot 1\n")
    with pytest.raises(ParseError) as err:
        parse(doc)
    assert "line 2" in str(err.value)


def test_parse_rejects_bad_header_and_tag():
    with pytest.raises(ParseError):
        parse("nonsense\n")
    with pytest.raises(ParseError):
        parse("packing 1\ndisk 1 0 0 1 x 1\nrot 1\n")
    with pytest.raises(ParseError):
        parse("packing 9\n")


def test_parse_error_locations():
    doc = ("packing 1\n"
           "# comment line\n"
           "disk 1 0.0 zero 1.0 0 1\n")
    with pytest.raises(ParseError) as err:
        parse(doc)
    assert err.value.line == 3


def _run(capsys, args):
    code = cli_run(args)
    return code, capsys.readouterr().out


def test_cli_case_analyze(tmp_path, capsys):
    code, doc = _run(capsys, ["case", "flower4"])
    assert code == 0
    path = tmp_path / "flower4.pack"
    path.write_text(doc)
    code, out = _run(capsys, ["analyze", str(path)])
    assert code == 0
    assert "rigid: true" in out
    assert "kernel_Re: 3" in out
    assert "cokernel_Re: 1" in out


def test_cli_second_order_prestress10(tmp_path, capsys):
    code, doc = _run(capsys, ["case", "prestress10"])
    path = tmp_path / "p.pack"
    path.write_text(doc)
    code, out = _run(capsys, ["second-order", str(path)])
    assert code == 0
    assert "flex_dim: 1" in out
    assert "blocked: true" in out
    assert "prestress_stable: true" in out


def test_cli_validate_corrupted_file_exit_1(tmp_path, capsys):
    path = tmp_path / "bad.pack"
    path.write_text("packing 1\ndisk 1 0 0 -1 0 1\nrot 1\n")
    code = cli_run(["validate", str(path)])
    capsys.readouterr()
    assert code == 1


def test_cli_reports_are_deterministic(tmp_path, capsys):
    code, doc = _run(capsys, ["case", "prestress10"])
    path = tmp_path / "p.pack"
    path.write_text(doc)
    _, out1 = _run(capsys, ["analyze", str(path)])
    _, out2 = _run(capsys, ["analyze", str(path)])
    assert out1 == out2
    _, doc2 = _run(capsys, ["case", "prestress10"])
    assert doc == doc2


def test_cli_layout_roundtrip(tmp_path, capsys):
    code, doc = _run(capsys, ["case", "flower4"])
    path = tmp_path / "f.pack"
    path.write_text(doc)
    code, out = _run(capsys, ["layout", str(path), "--boundary", "1,1,1,1"])
    assert code == 0
    from packrigid.io import parse as parse_doc
    g, pk, _ = parse_doc(out)
    assert pk.radii[4] == pytest.approx(2 ** 0.5 - 1, abs=1e-10)


def test_cli_matroid_cost_file(tmp_path, capsys):
    _, doc = _run(capsys, ["case", "general10"])
    path = tmp_path / "g.pack"
    path.write_text(doc)
    cost = tmp_path / "cost.txt"
    lines = []
    for v in range(1, 11):
        lines.append(f"{v} {0.0 if v in (2, 4, 5, 6, 8, 9, 10) else 1.0}")
    cost.write_text("\n".join(lines) + "\n")
    code, out = _run(capsys, ["matroid", str(path), "--cost", str(cost)])
    assert code == 0
    assert "size: 8" in out
    assert "cost: 1.0" in out


def test_cli_tolerance_flags_accepted(tmp_path, capsys):
    _, doc = _run(capsys, ["case", "flower4"])
    path = tmp_path / "f.pack"
    path.write_text(doc)
    code, out = _run(capsys, ["analyze", str(path), "--tol-rank", "1e-8",
                              "--tol-lp", "1e-6"])
    assert code == 0
    assert "rigid: true" in out


def test_cli_tolerance_env_profile(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PACKRIGID_TOLS", "rank=1e-8,lp=1e-6")
    _, doc = _run(capsys, ["case", "flower4"])
    path = tmp_path / "f.pack"
    path.write_text(doc)
    code, out = _run(capsys, ["analyze", str(path)])
    assert code == 0
    assert "rigid: true" in out


def test_svg_flower4_colors(flower4):
    g, pk, part = flower4
    doc = export_svg(g, pk, part)
    assert doc.count("<circle") == 5
    assert doc.count('fill="#5b8dd6"') == 4     # blue ring
    assert doc.count('fill="#d96459"') == 1     # red center
    assert "<svg" in doc and "</svg>" in doc


def test_svg_stress_labels(prestress10):
    from packrigid.first_order import find_proper_nontrivial_flex
    from packrigid.second_order import find_blocking_stress
    g, pk, part = prestress10
    flex = find_proper_nontrivial_flex(g, pk, part)
    stress = find_blocking_stress(g, pk, part, flex)
    doc = export_svg(g, pk, part, stress)
    assert doc.count("<circle") == 10
    labels = doc.count("<text") - 10            # id labels come first
    nonzero = int(np.sum(np.abs(stress.values) > 0))
    assert labels == nonzero
    assert nonzero == g.m                        # every edge carries stress here
    plain = export_svg(g, pk, part)
    assert plain.count("<text") == 10            # no edge labels without stress


def test_cli_export_svg(tmp_path, capsys):
    _, doc = _run(capsys, ["case", "flower4"])
    path = tmp_path / "f.pack"
    path.write_text(doc)
    out_path = tmp_path / "f.svg"
    code = cli_run(["export-svg", str(path), "-o", str(out_path)])
    capsys.readouterr()
    assert code == 0
    assert out_path.read_text().count("<circle") == 5
