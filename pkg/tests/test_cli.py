import json
import subprocess
import sys

import pytest

from orbitquant.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_star_example(capsys):
    code, out, _ = run(capsys, "star", "p", "exp(q)", "--chart", "affR+")
    assert code == 0
    assert out.strip() == "p*exp(q) + (-0.5*i)*exp(q)"


def test_star_unit(capsys):
    assert run(capsys, "star", "1", "p")[1].strip() == "p"


def test_star_affc_commutator(capsys):
    from orbitquant.orbits import get_chart
    from orbitquant.symbols import parse
    ch = get_chart("affC:0")
    ix2 = (ch.hamiltonian_map(ch.algebra["X2"]) * 1j).format()
    iy2 = (ch.hamiltonian_map(ch.algebra["Y2"]) * 1j).format()
    # "--" lets symbols start with a minus sign
    _, ab, _ = run(capsys, "star", "--chart", "affC:0", "--", ix2, iy2)
    _, ba, _ = run(capsys, "star", "--chart", "affC:0", "--", iy2, ix2)
    comm = parse(ab.strip(), ch.space) - parse(ba.strip(), ch.space)
    assert comm == ch.hamiltonian_map(-ch.algebra["Y1"]) * 1j


def test_star_parse_error_exit_2(capsys):
    code, _, err = run(capsys, "star", "p +* q", "p")
    assert code == 2 and "position 3" in err


def test_pbw(capsys):
    assert run(capsys, "pbw", "Y,X")[1].strip() == "X*Y - Y"
    assert run(capsys, "pbw", "Y2,X2", "--algebra", "aff_c")[1].strip() == "X2*Y2 + Y1"
    assert run(capsys, "pbw", "X,Y", "--order", "Y,X")[1].strip() == "Y*X + Y"
    assert run(capsys, "pbw", "X,Z")[0] == 2


def test_quantize(capsys):
    code, out, _ = run(capsys, "quantize", "p", "--chart", "affR+")
    assert code == 0 and "d_x" in out and "d_q" in out
    code, out, _ = run(capsys, "quantize", "0.7*p + 0.5*exp(q)", "--shear")
    assert code == 0 and "d_s" in out and "t" not in out.replace("d_s", "")


def test_algebra_check(capsys, tmp_path):
    assert run(capsys, "algebra", "check", "aff_c")[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "bad", "dim": 3, "basis": ["A", "B", "C"], "brackets": [
        {"i": 1, "j": 2, "terms": [{"k": 3, "c": 1}]}, {"i": 2, "j": 3, "terms": [{"k": 1, "c": 1}]},
        {"i": 1, "j": 3, "terms": [{"k": 1, "c": -1}]}]}))
    assert run(capsys, "algebra", "check", str(bad))[0] == 1
    broken = tmp_path / "broken.json"
    broken.write_text("{\n  \"name\": ")
    code, _, err = run(capsys, "algebra", "check", str(broken))
    assert code == 2 and "2:" in err


def test_stratify(capsys):
    code, out, _ = run(capsys, "orbits", "stratify", "aff_r", "--seed", "1", "--samples", "50",
                       "--format", "json", "--no-timestamp")
    assert code == 0
    assert json.loads(out)["rank_histogram"] == {"2": 50}
    assert run(capsys, "orbits", "stratify", "aff_r", "--samples", "5")[0] == 2


def test_commutator_check(capsys):
    assert run(capsys, "commutator-check", "--chart", "affC:0", "--seed", "3")[0] == 0


def test_verify_commutator(capsys):
    code, out, _ = run(capsys, "verify", "commutator", "--chart", "affR+", "--seed", "7", "--format", "json",
                       "--no-timestamp")
    assert code == 0
    report = json.loads(out)
    assert report["schema"] == "1" and report["passed"] is True


def test_verify_failure_exit_1(capsys):
    assert run(capsys, "verify", "commutator", "--chart", "affC:0", "--seed", "7", "--tol", "1e-300")[0] == 1


@pytest.mark.parametrize("args", [
    ["verify", "commutator"],
    ["verify", "representation", "--seed", "1", "--grid", "-8:8:1000"],
    ["verify", "nonsense", "--seed", "1"],
    ["verify", "commutator", "--seed", "1", "--chart", "so3"],
])
def test_config_errors_exit_2(capsys, args):
    assert run(capsys, *args)[0] == 2


def test_verify_representation_grid(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "representation", "--chart", "affR+", "--grid", "-8:8:4096", "--seed", "7",
                       "--format", "json", "--no-timestamp", "--dump-grids", str(tmp_path))
    assert code == 0
    report = json.loads(out)
    sups = [a["value"] for s in report["results"] for a in s["assertions"] if "flow vs closed form" in a["name"]]
    assert sups and max(sups) < 1e-8
    assert list(tmp_path.glob("*.json.bin"))


def test_output_file_and_determinism(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        code = subprocess.run([sys.executable, "-m", "orbitquant", "verify", "pbw", "--seed", "5", "--format", "json",
                               "--no-timestamp", "--output", str(p)], capture_output=True).returncode
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
