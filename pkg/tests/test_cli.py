import csv
import json
import shutil
import subprocess

import pytest

from asmoduli.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dims(capsys, tmp_path):
    code, out, _ = run(capsys, "dims", "--config", "cfg_a", "--levels", "0..2", "--out", str(tmp_path))
    assert code == 0
    rep = json.loads(out)
    assert [r["d_ell"] for r in rep["rows"]] == [1, 2, 8]
    assert json.loads((tmp_path / "dims.json").read_text()) == rep
    rows = list(csv.DictReader((tmp_path / "dims.csv").open()))
    assert [r["d_ell"] for r in rows] == ["1", "2", "8"]


def test_enumerate_and_budget(capsys, monkeypatch):
    code, out, _ = run(capsys, "enumerate", "--config", "cfg_a", "--levels", "1")
    assert code == 0
    rep = json.loads(out)
    assert rep["rows"] == [{"level": 1, "classes": 16, "pairs": 64}]
    monkeypatch.setenv("ASMODULI_BUDGET", "10")
    code, _, err = run(capsys, "enumerate", "--config", "cfg_a", "--levels", "1")
    assert code == 3 and "budget" in err


def test_reduce_and_iota(capsys):
    xy = '{"comps": [[1, {"poly": ["00", "01"], "pp": []}]]}'
    code, out, _ = run(capsys, "reduce", "--config", "cfg_a", "--levels", "1", "--element", xy)
    assert code == 0 and json.loads(out)["class"]["coords"] == ["01", "00"]
    code, out, _ = run(capsys, "iota", "--config", "cfg_a", "--levels", "1", "--coords", "01,10")
    rep = json.loads(out)
    assert rep["class"]["coords"] == ["01", "10"] and rep["image"]["rep"] == rep["class"]["rep"]
    code, _, err = run(capsys, "reduce", "--config", "cfg_a", "--levels", "1", "--element", '{"comps": [[2, {"poly": ["01"]}]]}')
    assert code == 2 and "sigma" in err


def test_local_commands(capsys):
    code, out, _ = run(capsys, "local-dims", "--config", "cfg_c", "--levels", "0..3")
    assert code == 0 and all(r["floor_formula"] in (None, r["d_local"]) for r in json.loads(out)["rows"])
    code, out, _ = run(capsys, "local-global-check", "--config", "cfg_a", "--levels", "0..3")
    rep = json.loads(out)
    assert code == 0 and rep["bijective"] and rep["global_pairs"] == rep["local_pairs"] == 16


def test_restrict_and_scan(capsys):
    code, out, _ = run(capsys, "restrict", "--config", "cfg_d", "--levels", "1..2")
    rep = json.loads(out)
    assert code == 0 and rep["stable_kernel_dim"] == 0 and rep["surjective_from_first"]
    code, out, _ = run(capsys, "scan-profiles", "--config", "scan_n3")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 4 and all(r["surjective"] for r in rows)


def test_groups(capsys, tmp_path):
    code, out, _ = run(capsys, "groups", "gp-rho", "--input", "groups_v4")
    assert code == 0 and len(json.loads(out)["rows"]) == 1
    code, out, _ = run(capsys, "groups", "solve-lift", "--input", "lift_f4")
    rep = json.loads(out)
    assert code == 0 and rep["rows"][0]["count"] == 4
    bad = tmp_path / "g.json"
    bad.write_text(json.dumps({"P": "dihedral:8", "P_prime": "cyclic:3"}))
    code, _, err = run(capsys, "groups", "gp-rho", "--input", str(bad))
    assert code == 2 and "dihedral" in err


def test_invalid_config_message(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"field": {"p": 2, "m": 1, "M": 2}, "base": {"punctures": ["0"]}, "cover": {"n": 2, "exponents": [1]}}))
    code, out, err = run(capsys, "dims", "--config", str(path))
    assert code == 2 and out == "" and "gcd(n,p)≠1" in err
    code, _, err = run(capsys, "dims")
    assert code == 2 and "--config" in err


@pytest.mark.skipif(shutil.which("asmoduli") is None, reason="console script not installed")
def test_console_script(tmp_path):
    res = subprocess.run(["asmoduli", "dims", "--config", "cfg_b", "--levels", "1"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["rows"][0]["d_ell"] == 2
