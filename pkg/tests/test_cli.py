from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from npsupport.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def gen(capsys, tmp_path, name, *argv):
    path = tmp_path / f"{name}.json"
    code, _, _ = run(capsys, "gen", *argv, "--output", str(path))
    assert code == 0
    return path


def test_star_build_verify(capsys, tmp_path):
    inst = gen(capsys, tmp_path, "star4", "--family", "star-primal", "--n", "4")
    out = tmp_path / "sup.json"
    code, _, _ = run(capsys, "build", "--kind", "primal", "--input", str(inst), "--verify", "--output", str(out))
    assert code == 0
    sup = json.loads(out.read_text())
    edges = {tuple(sorted((sup["labels"][a], sup["labels"][b]))) for a, b in sup["edges"]}
    assert {(a, b) for a in range(1, 5) for b in range(a + 1, 5)} <= edges
    code, out_text, _ = run(capsys, "verify", "--kind", "primal", "--input", str(inst), "--support", str(out))
    assert code == 0 and json.loads(out_text)["ok"]


def test_verify_detects_broken_support(capsys, tmp_path):
    inst = gen(capsys, tmp_path, "star4", "--family", "star-primal", "--n", "4")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"labels": [1, 2, 3, 4], "edges": [[0, 1]], "provenance": {"kind": "primal"}}))
    code, _, err = run(capsys, "verify", "--kind", "primal", "--input", str(inst), "--support", str(bad))
    assert code == 4
    assert json.loads(err.strip().splitlines()[-1])["error"] == "oracle"


@pytest.mark.parametrize("family,kind", [("asteroidal", "outerplanar-intersection"), ("asteroidal", "outerplanar-dual"), ("alternating", "outerplanar-intersection")])
def test_counterexamples_exit_3(capsys, tmp_path, family, kind):
    inst = gen(capsys, tmp_path, family, "--family", family)
    code, _, err = run(capsys, "build", "--kind", kind, "--input", str(inst))
    assert code == 3
    witness = json.loads(err.strip().splitlines()[-1])["witness"]
    assert {"first", "second", "vertices"} <= set(witness)


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, _ = run(capsys, "build", "--kind", "primal", "--input", str(tmp_path / "nope.json"))
    assert code == 2


def test_malformed_instance_exit_2(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"graph": {"n": 2, "edges": []}, "H": [[0, 5]]}')
    assert run(capsys, "build", "--kind", "dual", "--input", str(p))[0] == 2
    p.write_text("not json")
    assert run(capsys, "build", "--kind", "dual", "--input", str(p))[0] == 2


def test_disconnected_member_exit_3(capsys, tmp_path):
    p = tmp_path / "disc.json"
    p.write_text('{"graph": {"n": 3, "edges": [[0, 1], [1, 2]]}, "H": [[0, 2]]}')
    assert run(capsys, "build", "--kind", "dual", "--input", str(p))[0] == 3


def test_gen_primal_lb_member_count(capsys, tmp_path):
    inst = json.loads(gen(capsys, tmp_path, "lb", "--family", "primal-lb", "--m", "4").read_text())
    assert len(inst["H"]) == 4
    inst = json.loads(gen(capsys, tmp_path, "dlb", "--family", "dual-lb", "--m", "2").read_text())
    assert len(inst["H"]) == 1


def test_gen_is_byte_identical(capsys, tmp_path):
    args = ("--family", "clique-random", "--t", "3", "--members", "50", "--seed", "7")
    a = gen(capsys, tmp_path, "a", *args).read_bytes()
    b = gen(capsys, tmp_path, "b", *args).read_bytes()
    assert a == b


def test_check_properties(capsys, tmp_path):
    ast = gen(capsys, tmp_path, "ast", "--family", "asteroidal")
    assert run(capsys, "check", "--property", "abab", "--input", str(ast))[0] == 0
    code, _, err = run(capsys, "check", "--property", "axax", "--input", str(ast))
    assert code == 3 and "witness" in err
    alt = gen(capsys, tmp_path, "alt", "--family", "alternating")
    assert run(capsys, "check", "--property", "axax", "--input", str(alt))[0] == 0
    code, _, err = run(capsys, "check", "--property", "strong-axax", "--input", str(alt))
    w = json.loads(err.strip().splitlines()[-1])["witness"]
    assert code == 3 and (w["first"], w["second"]) == (0, 2)
    cl = gen(capsys, tmp_path, "cl", "--family", "clique-random", "--t", "2", "--n", "15")
    assert run(capsys, "check", "--property", "nonpiercing", "--input", str(cl))[0] == 0
    code, out, _ = run(capsys, "check", "--property", "exact-treewidth", "--input", str(cl))
    assert code == 0 and json.loads(out.splitlines()[0])["exact_treewidth"] == 2


def test_round_trip_with_td(capsys, tmp_path):
    td = tmp_path / "td.json"
    inst = gen(capsys, tmp_path, "ci", "--family", "clique-intersection", "--t", "2", "--n", "20", "--td-out", str(td))
    for kind in ("primal", "dual", "intersection"):
        out = tmp_path / f"{kind}.json"
        dot = tmp_path / f"{kind}.dot"
        code, _, _ = run(capsys, "build", "--kind", kind, "--input", str(inst), "--td", str(td),
                         "--verify", "--output", str(out), "--dot", str(dot))
        assert code == 0
        assert dot.read_text().startswith("graph support {")
        assert run(capsys, "verify", "--kind", kind, "--input", str(inst), "--support", str(out))[0] == 0


def test_outerplanar_build(capsys, tmp_path):
    inst = gen(capsys, tmp_path, "op", "--family", "outerplanar-random", "--n", "14", "--members", "6", "--seed", "2")
    for kind in ("outerplanar-primal", "outerplanar-dual", "outerplanar-intersection"):
        assert run(capsys, "build", "--kind", kind, "--input", str(inst), "--verify", "--output", str(tmp_path / "s.json"))[0] == 0


def test_sweep_rows(capsys):
    code, out, err = run(capsys, "sweep", "--kind", "primal", "dual", "--t", "2", "--n", "15", "--seeds", "3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 6
    assert all(r["oracle_pass"] == "True" and int(r["width_achieved"]) <= int(r["width_bound"]) for r in rows)
    assert json.loads(err.strip())["failures"] == 0


def test_sweep_outerplanar_parallel(capsys):
    code, out, _ = run(capsys, "sweep", "--kind", "outerplanar-intersection", "--n", "20", "--seeds", "4", "--jobs", "2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["width_bound"] for r in rows] == ["2"] * 4


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "npsupport", "gen", "--family", "star-dual", "--n", "3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert len(json.loads(res.stdout)["H"]) == 3
