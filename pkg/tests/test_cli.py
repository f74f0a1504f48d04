from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from parallax.cli import main
from parallax.corpus import get_example, list_examples


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_list_examples(capsys):
    code, out, _ = run(capsys, "list-examples")
    assert code == 0
    assert len(out.strip().splitlines()) >= 9
    code, out, _ = run(capsys, "list-examples", "--json")
    names = [e["name"] for e in json.loads(out)["examples"]]
    assert {"ex-B", "ex-MD", "ex-MD-log", "sl2-nu"} <= set(names)
    assert sum(n.startswith("hg-") for n in names) >= 6


@pytest.mark.parametrize("name", [e["name"] for e in list_examples()])
def test_every_example_is_green(capsys, name):
    code, out, _ = run(capsys, "example", name)
    assert code == 0, out
    assert "FAIL" not in out


def test_example_b_full_suite(capsys):
    code, out, _ = run(capsys, "example", "ex-B", "--check", "all", "--json")
    assert code == 0
    report = json.loads(out)
    names = [c["name"] for c in report["checks"]]
    assert names == ["structure-constants", "coframe", "maurer-cartan", "reciprocal[coordinate]",
                     "reciprocal[parallelism]", "lie-connection", "horizontal", "opposite-brackets"]
    rec = report["checks"][3]["data"]["christoffel"]
    assert rec == [{"i": 2, "j": 1, "k": 1, "value": "-1"}]


def test_output_is_deterministic(capsys):
    first = run(capsys, "example", "ex-MD", "--json")[1]
    second = run(capsys, "example", "ex-MD", "--json")[1]
    assert first == second


def test_check_selection(capsys):
    code, out, _ = run(capsys, "example", "ex-B", "--check", "coframe,maurer-cartan")
    assert code == 0 and out.count("PASS") == 2
    code, _, err = run(capsys, "example", "ex-B", "--check", "nonsense")
    assert code == 2 and "SchemaError" in err


def test_galois_hypergeometric(capsys):
    code, out, _ = run(capsys, "galois", "--hypergeometric", "a=1/2", "b=1/2", "c=1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["psl2_class"] == "Full" and data["sl2_class"] == "Full"
    assert "certificate" in data


def test_galois_flags(capsys):
    code, out, _ = run(capsys, "galois", "--hypergeometric", "a=-1", "b=0", "c=c",
                       "--irrational", "c", "--json")
    assert code == 0 and json.loads(out)["psl2_class"] == "Borel"
    code, out, _ = run(capsys, "galois", "--hypergeometric", "a=-1", "b=0", "c=c",
                       "--integer", "c", "--json")
    assert code == 2
    assert json.loads(out)["error"] == "Undecidable"


def test_galois_nu_with_certificate(capsys):
    code, out, _ = run(capsys, "galois", "--nu", "-2", "--json")
    data = json.loads(out)
    assert code == 0 and data["sl2_class"] == "DiagonalTorus"
    assert data["certificate"]["verified"]


def test_malformed_coefficient(capsys, tmp_path):
    path = write(tmp_path, "bad.json", {"kind": "parallelism", "chart": ["x"], "frame": [["1//2"]]})
    code, out, _ = run(capsys, "run", path, "--json")
    assert code == 2
    err = json.loads(out)
    assert err["error"] == "SchemaError"
    assert err["witness"]["pointer"] == "/frame/0/0"
    assert err["witness"]["position"] == 2


def test_schema_violation_has_pointer(capsys, tmp_path):
    path = write(tmp_path, "bad.json", {"kind": "parallelism", "chart": ["x"], "frame": [[1.5]]})
    code, _, err = run(capsys, "check-parallelism", path)
    assert code == 2 and "/frame/0/0" in err
    path = write(tmp_path, "bad2.json", {"chart": ["x"]})
    assert run(capsys, "run", path)[0] == 2


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "run", str(tmp_path / "absent.json"))[0] == 2


def test_verification_failure_exits_1(capsys, tmp_path):
    path = write(tmp_path, "broken.json", {
        "kind": "connection", "chart": ["x", "y"],
        "christoffel": [{"i": 1, "j": 2, "k": 1, "value": "y"}]})
    code, out, _ = run(capsys, "lie-connection", path, "--json")
    assert code == 1
    data = json.loads(out)["checks"][0]["data"]
    assert data["witnesses"]["curvature"]["index"] == [1, 2, 2, 1]


def test_library_error_exits_1(capsys, tmp_path):
    path = write(tmp_path, "nonconst.json", {"kind": "parallelism", "chart": ["x", "y"],
                                             "frame": [["1", "0"], ["0", "x"]]})
    code, _, err = run(capsys, "check-parallelism", path)
    assert code == 1 and "NonConstantCoefficients" in err and "witness" in err


def test_tower_file(capsys, tmp_path):
    manifest = write(tmp_path, "m.json", {
        "kind": "parallelism", "chart": ["x", "y"], "frame": [["1", "0"], ["x", "1"]],
        "horizontal": [["t", "0"], ["0", "1"]]})
    tower = write(tmp_path, "tower.json", [{"name": "t", "derivatives": {"y": "t"}}])
    code, out, _ = run(capsys, "horizontal", manifest, "--tower", tower)
    assert code == 0 and "2/2 fields horizontal" in out
    code, _, err = run(capsys, "horizontal", manifest)
    assert code == 2 and "unknown symbol 't'" in err


def test_frame_choice(capsys, tmp_path):
    path = write(tmp_path, "b.json", get_example("ex-B"))
    code, out, _ = run(capsys, "reciprocal", path, "--frame", "parallelism", "--json")
    entries = json.loads(out)["checks"][0]["data"]["christoffel"]
    assert code == 0
    assert entries == [{"i": 1, "j": 2, "k": 1, "value": "1"}, {"i": 2, "j": 1, "k": 1, "value": "-1"}]


def test_isogeny_and_conjugating_map(capsys, tmp_path):
    iso = write(tmp_path, "iso.json", {
        "kind": "isogeny", "chart": ["x"], "frame": [["x/2"]],
        "isogeny": {"target_chart": ["u"], "map": ["x^2"], "target_frame": [["u"]]}})
    assert run(capsys, "isogeny", iso)[0] == 0
    bad = write(tmp_path, "iso2.json", {
        "kind": "isogeny", "chart": ["x"], "frame": [["x/3"]],
        "isogeny": {"target_chart": ["u"], "map": ["x^2"], "target_frame": [["u"]]}})
    assert run(capsys, "isogeny", bad)[0] == 1
    conj = write(tmp_path, "conj.json", {
        "kind": "parallelism", "chart": ["a", "b"], "frame": [["0", "a"], ["a", "0"]],
        "second_frame": [["0", "-1"], ["-a", "-b"]]})
    code, out, _ = run(capsys, "conjugating-map", conj, "--json")
    assert code == 0
    assert json.loads(out)["checks"][0]["data"]["matrix"] == [["1/a", "b/a"], ["0", "1"]]


def test_sl2_commands(capsys):
    code, out, _ = run(capsys, "sl2", "build", "--json")
    assert code == 0 and json.loads(out)["checks"][0]["data"]["determinant"] == "2*z1^3"
    code, out, _ = run(capsys, "sl2", "symmetry-ode", "--nu", "1/z^2")
    assert code == 0 and "a'''" in out


def test_usage_error(capsys):
    assert run(capsys, "galois")[0] == 2


@pytest.mark.skipif(shutil.which("parallax") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["parallax", "galois", "--hypergeometric", "a=1/2", "b=1/2", "c=1", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["psl2_class"] == "Full"
