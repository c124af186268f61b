import json

import pytest

from tropinfl.cli import main, parse_conditions, parse_polygon
from tropinfl.codes import LinearCode
from tropinfl.lattice import convex_hull, rectangle, triangle


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr().out
    return status, out


def run_json(capsys, *argv):
    status, out = run(capsys, *argv, "--format", "json")
    data = json.loads(out)
    assert data["schema"] == "tropinfl/1" and data["command"] == argv[0]
    return status, data


def test_parsers(tmp_path):
    assert parse_polygon("triangle:3") == triangle(3)
    assert parse_polygon("rect:2x3") == rectangle(2, 3)
    assert parse_polygon("0,0;2,0;0,2") == triangle(2)
    f = tmp_path / "poly.json"
    f.write_text(json.dumps(convex_hull([(0, 0), (1, 0), (0, 1)]).to_json()))
    assert parse_polygon(str(f)) == triangle(1)
    assert parse_conditions("0,0:2; 1,1") == [((0, 0), 2), ((1, 1), 1)]


def test_width_and_area(capsys):
    status, data = run_json(capsys, "width", "rect:2x5")
    assert status == 0 and data["width"] == 2
    status, data = run_json(capsys, "area", "triangle:2")
    assert data["area"] == "2" and data["lattice_points"] == 6 and data["interior_points"] == 0


def test_trop_line(capsys):
    status, data = run_json(capsys, "trop", "x + y + 1")
    assert status == 0 and data["ok"] and len(data["cells"]) == 1
    status, out = run(capsys, "trop", "x + y + 1", "--format", "svg")
    assert out.startswith("<svg") and out.count("<line") == 3


def test_trop_degenerate_is_rejected(capsys):
    status, data = run_json(capsys, "trop", "x^2 + 1")
    assert status == 2 and data["error"]["kind"] == "degenerate_newton_polygon"


def test_infl(capsys):
    status, data = run_json(capsys, "infl", "x + y - 2", "0,0")
    assert status == 0 and data["multiplicity_at_lift"] == 1 and data["influence_area"] == "1"
    status, data = run_json(capsys, "infl", "x + y + 1", "1,0")
    assert status == 2 and data["error"]["kind"] == "point_not_on_curve"
    # (x - 1)^2 (y - 1) is triple at (1, 1) but its polygon has width 1
    status, data = run_json(capsys, "infl", "x^2*y - 2*x*y + y - x^2 + 2*x - 1", "0,0")
    assert status == 2 and data["error"]["kind"] == "hypothesis_failed"
    assert data["multiplicity_at_lift"] == 3 and data["influence_area"] == "4"


def test_bounds(capsys):
    status, data = run_json(capsys, "bounds", "--mults", "2,2,2,2,2", "--width", "4")
    assert status == 0 and data["bounds"]["theorem1"]["value"] == "6"
    status, data = run_json(capsys, "bounds", "--mults", "5,5", "--width", "4", "--strict")
    assert status == 2 and data["error"]["kind"] == "hypothesis_failed"


def test_floor_pipeline(capsys):
    status, data = run_json(capsys, "floor", "--polygon", "rect:2x3", "--n", "6", "--m", "2")
    assert status == 0 and data["kernel_dim"] == 0 and data["theorem1_predicts_no_curve"]
    assert all(data["checks"].values())
    status, data = run_json(capsys, "floor", "--polygon", "rect:3x4", "--n", "3", "--m", "2")
    assert status == 0 and data["checks"]["floor_certificate"]
    status, data = run_json(capsys, "floor", "--polygon", "rect:1x4", "--n", "2", "--m", "3")
    assert status == 2 and data["error"]["kind"] == "width_too_small"


def test_solve_and_detrop(capsys):
    status, data = run_json(capsys, "solve", "--degree", "2", "--points", "1,2:2")
    assert status == 0 and data["actual_dimension"] == data["expected_dimension"] == 2
    status, data = run_json(capsys, "solve", "--degree", "2", "--points", "1,2:2", "--domain", "F_p[t,1/t]")
    assert data["domain"] == "F_32003[t,1/t]"
    status, data = run_json(capsys, "detrop", "--degree", "3", "--points", "0,0:2;1,3:2")
    # a = 1 sends both points to (1, 1)
    assert status == 0 and data["a"] == 2 and data["rejected"] == [1]
    status, data = run_json(capsys, "solve", "--degree", "2", "--points", "1/2,0:1", "--domain", "Q[t,1/t]")
    assert status == 2


def test_code_round_trip(capsys, tmp_path):
    out = tmp_path / "code.txt"
    status, _ = run(capsys, "code", "--out", str(out))
    assert status == 0
    code = LinearCode.from_text(out.read_text())
    assert (code.length, code.dimension) == (18, 12)
    status, data = run_json(capsys, "check-code", str(out))
    assert data["rank"] == 12
    status, data = run_json(capsys, "code", "--n", "5")
    assert status == 2 and data["error"]["kind"] == "infeasible"


def test_code_min_distance(capsys):
    status, data = run_json(capsys, "code", "--d", "1", "--N", "1", "--n", "5", "--m", "1", "--p", "11", "--min-distance")
    assert status == 0 and data["code"]["dimension"] == 4 and data["min_distance"] == 2
    status, data = run_json(capsys, "code", "--d", "1", "--N", "1", "--n", "5", "--m", "1", "--p", "5")
    assert status == 1 and "merges two points" in data["reason"]


def test_text_and_svg_fallbacks(capsys):
    status, out = run(capsys, "width", "rect:2x5")
    assert "width: 2" in out.splitlines()
    status, data = run_json(capsys, "width", "rect:2x5")
    status, out = run(capsys, "width", "rect:2x5", "--format", "svg")
    assert status == 2 and json.loads(out)["error"]["kind"] == "no_figure"


def test_bad_input(capsys):
    status, data = run_json(capsys, "width", "nothing here")
    assert status == 2
    with pytest.raises(SystemExit):
        main(["nosuchcommand"])
