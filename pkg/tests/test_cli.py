import json
import subprocess
import sys

import pytest

from plslab.cli import main


@pytest.fixture
def run(capsys):
    def go(*argv):
        code = main([str(a) for a in argv])
        out = capsys.readouterr()
        return code, out.out, out.err
    return go


def test_module_entry_point(fixtures):
    proc = subprocess.run([sys.executable, "-m", "plslab", "check", str(fixtures / "cycle3.json"),
                           "--lang", "ACYCLIC"], capture_output=True, text=True)
    assert proc.returncode == 0 and "nonmember, distance 1" in proc.stdout


def test_check(run, fixtures):
    assert run("check", fixtures / "tree_member.json", "--lang", "ST_L")[:2] == (0, "member, distance 0\n")
    code, out, _ = run("check", fixtures / "path10_split.json", "--lang", "ST_P")
    assert code == 0 and out == "nonmember, distance 5\n"
    code, out, _ = run("check", fixtures / "leader_two.json", "--lang", "LEADER")
    assert out == "nonmember, distance 1\n"


def test_check_budget_exit(run, fixtures):
    code, out, err = run("check", fixtures / "big_regular.json", "--lang", "REGULAR", "--budget", 10)
    assert code == 3 and "distance >=" in out and "budget" in err


def test_bad_input_exit(run, fixtures, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"label_kind": "pointer", "nodes": [{"id": 1, "label": null}], "edges": [{"u": 1, "v": 1}]}')
    code, _, err = run("check", bad, "--lang", "ACYCLIC")
    assert code == 2 and "self-loop" in err
    assert run("check", tmp_path / "missing.json", "--lang", "ACYCLIC")[0] == 2
    assert run("check", fixtures / "cycle3.json")[0] == 2


def test_prove_then_verify(run, fixtures, tmp_path):
    certs = tmp_path / "certs.json"
    assert run("prove", fixtures / "mst_member.json", "--lang", "MST_L", "--out", certs)[0] == 0
    doc = json.loads(certs.read_text())
    assert doc["scheme"] == "mst" and len(doc["certs"]) == 4
    code, out, _ = run("verify", fixtures / "mst_member.json", "--lang", "MST_L", "--certs", certs)
    assert code == 0 and out.strip().endswith("k = 0")
    code, out, _ = run("verify", fixtures / "mst_nonmember.json", "--lang", "MST_L", "--certs", certs)
    assert code == 0 and "k = 0" not in out


def test_verify_garbage_and_nonmember(run, fixtures):
    code, out, _ = run("verify", fixtures / "tree_member.json", "--lang", "ST_L",
                       "--certs", fixtures / "garbage_certs.json")
    assert code == 0 and out.count("reject") == 5 and "k = 5" in out
    assert run("verify", fixtures / "tree_broken.json", "--lang", "ST_L")[0] == 2


def test_prove_refuses_nonmember(run, fixtures):
    code, _, err = run("prove", fixtures / "cycle3.json", "--lang", "ACYCLIC")
    assert code == 2 and "not in" in err


def test_construct(run, tmp_path):
    code, out, _ = run("construct", "path-stp", 10, "--out", tmp_path / "p")
    assert code == 0 and "rejecting = [5, 6]" in out
    assert (tmp_path / "p" / "instance.json").exists()
    code, out, _ = run("verify", tmp_path / "p" / "instance.json", "--scheme", "stp",
                       "--certs", tmp_path / "p" / "certs.json")
    assert "k = 2" in out
    assert run("construct", "path-stp", 5, "--out", tmp_path / "q")[0] == 2
    code, out, _ = run("construct", "wrapper-fake", "cycle:12", "--out", tmp_path / "w")
    assert code == 0 and "k = 1" in out
    code, out, _ = run("construct", "regular-glue", 2, 6, 3, 6, "--out", tmp_path / "g")
    assert code == 0
    assert run("construct", "regular-glue", 2, "--out", tmp_path / "x")[0] == 2


def test_attack(run, fixtures, tmp_path):
    code, out, _ = run("attack", fixtures / "cycle3.json", "--lang", "ACYCLIC", "--out", tmp_path / "w.json")
    assert code == 0 and "k-min = 1" in out and "exhaustive = true" in out
    assert (tmp_path / "w.json").exists()
    code, out, _ = run("attack", fixtures / "mst_nonmember.json", "--lang", "MST_L")
    assert code == 0 and "k-min = 2" in out
    code, out, _ = run("attack", fixtures / "cycle3.json", "--lang", "ACYCLIC", "--cutoff", 1)
    assert "no certificate map with fewer than 1" in out


def test_sensitivity_is_deterministic(run, tmp_path):
    outs = []
    for d in ("a", "b"):
        code, out, _ = run("sensitivity", "--preset", "acyclic", "--max-n", 3, "--out", tmp_path / d)
        assert code == 0
        outs.append((tmp_path / d / "report.csv").read_text())
    assert outs[0] == outs[1]
    summary = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert summary["all_exhaustive"] and summary["min_ratio"] >= 1.0
    code, out, _ = run("sensitivity", "--preset", "st", "--count", 5, "--max-n", 4, "--seed", 3)
    assert code == 0 and json.loads(out)["instances"] == 5


def test_probe(run, tmp_path):
    code, out, _ = run("probe", "--lang", "LEADER", "--max-n", 4, "--beta", 2, "--out", tmp_path / "p.json")
    assert code == 0 and "beta = 2: no violation found" in out
    doc = json.loads((tmp_path / "p.json").read_text())
    assert doc["exhaustive"] and not doc["results"][0]["violation"]
