import json
import subprocess
import sys

import pytest

from girthforge.cli import main
from girthforge.graph import graph_equal, is_regular
from girthforge.io import read_graph, read_signing


def run(*args):
    return main([str(a) for a in args])


@pytest.fixture
def g_json(tmp_path):
    path = tmp_path / "g.json"
    assert run("sample", "--n", 10000, "--d", 3, "--seed", 10, "--mode", "simple", "--out", path) == 0
    return path


def test_sample_stdout(capsys):
    assert run("sample", "--n", 10, "--d", 3, "--seed", 1) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["n"] == 10 and len(data["edges"]) == 15


def test_sample_usage_errors(capsys):
    assert run("sample", "--n", 5, "--d", 3) == 2
    assert "even" in capsys.readouterr().err
    with pytest.raises(SystemExit) as info:
        run("sample", "--n", 5)
    assert info.value.code == 2


def test_analyze(tmp_path, capsys):
    path = tmp_path / "k4.json"
    path.write_text(json.dumps({"n": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]}))
    assert run("analyze", "--in", path, "--cycles-up-to", 3) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["girth"] == 3 and rep["counts"]["3"] == 4 and len(rep["cycles"]) == 4
    assert run("analyze", "--in", path, "--check-rlt", 1, 3, 10) == 1


def test_malformed_input(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 3, "edges": [[0, 1],')
    assert run("analyze", "--in", path) == 2
    assert "offset" in capsys.readouterr().err
    assert run("analyze", "--in", tmp_path / "missing.json") == 2


def test_spectrum(g_json, tmp_path, capsys):
    out = tmp_path / "s.json"
    assert run("spectrum", "--in", g_json, "--out", out) == 0
    s = json.loads(out.read_text())
    assert s["method"] == "iterative" and abs(s["lambda1"] - 3) < 1e-6


def test_fix_lift_convert(g_json, tmp_path, capsys):
    fixed, plan = tmp_path / "f.json", tmp_path / "p.json"
    assert run("fix", "--in", g_json, "--r", 3, "--out", fixed, "--plan", plan, "--verify") == 0
    audit = json.loads(capsys.readouterr().out)
    assert audit["regular"] and audit["girth_ok"]
    p = json.loads(plan.read_text())
    assert p["tau"] == 1 and len(p["E_c"]) == 1 and p["h"] == 3

    lifted, signing = tmp_path / "l.json", tmp_path / "w.json"
    assert run("lift", "--in", fixed, "--seed", 4, "--save-signing", signing, "--out", lifted) == 0
    lg = read_graph(lifted)
    assert lg.n == 2 * read_graph(fixed).n and is_regular(lg, 3)
    again = tmp_path / "l2.json"
    assert run("lift", "--in", fixed, "--signing", signing, "--out", again) == 0
    assert graph_equal(read_graph(again), lg)
    assert run("lift", "--in", fixed, "--out", again) == 2

    assert run("spectrum", "--in", fixed, "--signing", signing) == 0
    assert "signed_spectral_radius" in capsys.readouterr().out
    edgelist = tmp_path / "l.txt"
    assert run("convert", "--in", lifted, "--out", edgelist) == 0
    assert graph_equal(read_graph(edgelist), lg)
    assert run("convert", "--in", lifted, "--out", tmp_path / "l.dot") == 0
    assert len(read_signing(signing)) == read_graph(fixed).m


def test_fix_precondition_is_usage_error(tmp_path, capsys):
    path = tmp_path / "g.json"
    run("sample", "--n", 10000, "--d", 3, "--seed", 0, "--mode", "simple", "--out", path)
    assert run("fix", "--in", path, "--r", 3, "--out", tmp_path / "f.json") == 2
    assert "bicycle-free" in capsys.readouterr().err


def test_fix_capacity_is_internal(tmp_path):
    path = tmp_path / "g.json"
    run("sample", "--n", 200, "--d", 3, "--seed", 1, "--mode", "simple", "--out", path)
    with pytest.warns(UserWarning):
        assert run("fix", "--in", path, "--r", 5, "--force", "--out", tmp_path / "f.json") == 3


def test_pipeline(tmp_path, capsys):
    out, log = tmp_path / "final.json", tmp_path / "prov.json"
    code = run("pipeline", "--target-n", 2**14, "--d", 3, "--epsilon", 0.3, "--c", 0.2, "--seed", 3,
               "--out", out, "--log", log)
    assert code == 0
    prov = json.loads(log.read_text())
    assert prov["result"]["n"] == read_graph(out).n >= 2**14
    assert run("pipeline", "--target-n", 2**14, "--c", 0.9, "--out", out) == 2


def test_experiment(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"name": "t", "n": 500, "n_seeds": 3, "thresholds": {"simple": 1.0}}))
    assert run("experiment", "--spec", spec, "--out-dir", tmp_path / "out") == 0
    assert (tmp_path / "out" / "report.json").exists()
    spec.write_text(json.dumps({"name": "t", "n": 500, "n_seeds": 3, "mode": "configuration",
                                "thresholds": {"simple": 1.0}}))
    assert run("experiment", "--spec", spec, "--out-dir", tmp_path / "out2") == 1
    assert "FAIL simple" in capsys.readouterr().out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "girthforge", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "girthforge" in proc.stdout
