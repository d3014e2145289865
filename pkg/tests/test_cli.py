"""The command-line interface."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from nilclass4.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    doc = json.loads(out)
    assert doc["schema"] == "nilclass4/1"
    return code, doc


@pytest.mark.parametrize("argv,count", [(("--q", "2"), 27), (("--q", "3", "--abelian-only"), 11), (("--q", "4"), 37)])
def test_catalog_counts(capsys, argv, count):
    code, doc = run_json(capsys, "catalog", *argv)
    assert code == 0 and doc["result"]["count"] == count == len(doc["result"]["entries"])


def test_catalog_text_and_pe(capsys):
    code, out, _ = run(capsys, "catalog", "--p", "2", "--e", "2", "--nonabelian-only")
    assert code == 0 and "26 classes" in out and "U5(" in out


def test_json_is_deterministic(capsys):
    first = run(capsys, "catalog", "--q", "3", "--json")[1]
    second = run(capsys, "catalog", "--q", "3", "--json")[1]
    assert first == second


def test_build_iso_canon(capsys, tmp_path):
    code, out, _ = run(capsys, "build", "--q", "3", "--label", "U4(1,0,0)", "--random-basis", "7")
    assert code == 0
    a = tmp_path / "a.json"
    a.write_text(out)
    b = tmp_path / "b.json"
    b.write_text(run(capsys, "build", "--q", "3", "--label", "U4(1,0,0)")[1])
    c = tmp_path / "c.json"
    c.write_text(run(capsys, "build", "--q", "3", "--label", "U3(0,1,1)")[1])

    code, doc = run_json(capsys, "iso", str(a), str(b))
    assert code == 0 and doc["result"]["isomorphic"] and doc["result"]["witness"]["n"] == 4
    code, doc = run_json(capsys, "iso", str(a), str(c))
    assert code == 0 and not doc["result"]["isomorphic"] and doc["result"]["witness"] is None

    code, doc = run_json(capsys, "canon", str(a))
    assert code == 0 and doc["result"]["label"] == "U4(1,0,0)"
    code, doc = run_json(capsys, "invariants", str(c))
    assert code == 0 and doc["result"]["dim_N2"] == 2


def test_build_unknown_label(capsys):
    code, _, err = run(capsys, "build", "--q", "3", "--label", "U9(1)")
    assert code == 2 and "no catalog entry" in err


def test_congruence_commands(capsys):
    code, doc = run_json(capsys, "congruence", "classify", "--q", "3", "--type", "asym")
    assert code == 0 and doc["result"]["count"] == 11
    assert sorted(c["catalog_entry"] for c in doc["result"]["classes"]) == list(range(11))
    code, doc = run_json(capsys, "congruence", "test", "--q", "3", "--a", "1,0,0;0,0,0;0,0,0", "--b", "2,0,0;0,0,0;0,0,0")
    assert code == 0 and doc["result"]["congruent"]
    code, doc = run_json(capsys, "congruence", "test", "--q", "3", "--a", "1,0,0;0,0,0;0,0,0", "--b", "1,0,0;0,1,0;0,0,1")
    assert code == 0 and not doc["result"]["congruent"]
    code, _, err = run(capsys, "congruence", "test", "--q", "3", "--a", "1,0;0,1")
    assert code == 2


def test_equiv_commands(capsys):
    code, doc = run_json(capsys, "equiv", "a-rho", "--q", "5", "--rho", "1")
    assert code == 0 and doc["result"]["count"] == sum(1 for _ in doc["result"]["transversal"])
    code, doc = run_json(capsys, "equiv", "u4", "--q", "5", "--rho", "1", "--pair1", "2,3", "--pair2", "2,2")
    assert code == 0 and doc["result"]["conjugate"] and doc["result"]["witness"] is not None
    code, doc = run_json(capsys, "equiv", "u4", "--q", "5", "--rho", "1", "--rho2", "2", "--pair1", "0,0", "--pair2", "0,0")
    assert code == 0 and not doc["result"]["conjugate"]
    code, _, err = run(capsys, "equiv", "u4", "--q", "5", "--pair1", "1,0", "--pair2", "0,0")
    assert code == 2 and "beta1" in err


def test_verify_exit_codes(capsys):
    code, doc = run_json(capsys, "verify", "--q", "2", "--suite", "full")
    assert code == 0 and doc["result"]["passed"]
    assert all(c["status"] == "PASS" for c in doc["result"]["checks"])
    code, doc = run_json(capsys, "verify", "--q", "7", "--suite", "quick")
    statuses = {c["name"]: c["status"] for c in doc["result"]["checks"]}
    assert code == 0 and statuses["invariant_table"] == "SKIP" and statuses["counts"] == "PASS"
    assert "seconds" not in doc["result"]["checks"][0]


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "bounds.cfg"
    cfg.write_text("# bounds\nmax_q = 4\n")
    code, _, err = run(capsys, "catalog", "--q", "5", "--config", str(cfg))
    assert code == 2 and "bound" in err
    cfg.write_text("colour = blue\n")
    code, _, err = run(capsys, "catalog", "--q", "2", "--config", str(cfg))
    assert code == 2 and "unknown key" in err


def test_env_bound(capsys, monkeypatch):
    monkeypatch.setenv("NILCLASS4_MAX_Q", "3")
    code, _, err = run(capsys, "catalog", "--q", "4")
    assert code == 2 and "bound" in err


def test_field_errors(capsys):
    assert run(capsys, "catalog", "--q", "6")[0] == 2
    assert run(capsys, "catalog")[0] == 2


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "nilclass4", "catalog", "--q", "2", "--abelian-only"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert "11 classes" in out.stdout
