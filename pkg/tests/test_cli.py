import json
import os

import numpy as np
import pytest

from maxrand import cli
from maxrand.scenario import read_behavior, chsh_value


def run(argv, capsys=None):
    code = cli.main(argv)
    return code


def test_family_bipartite_summary(tmp_path, capsys):
    out = str(tmp_path / "fam")
    code = run(["family", "bipartite", "--x", "0.45", "--z", "0.45", "--out", out])
    captured = capsys.readouterr()
    assert code == 0
    assert "chsh=2.56" in captured.out
    assert "g=0.141421356237" in captured.out
    beh = read_behavior(out + ".behavior.json")
    assert chsh_value(beh) == pytest.approx(2.56, abs=1e-9)
    manifest = json.loads((tmp_path / "fam.manifest.json").read_text())
    assert manifest["command"] == "family"
    assert len(manifest["outputs"]) == 2


def test_family_infeasible_exit_2(tmp_path, capsys):
    code = run(["family", "bipartite", "--x", "0.1", "--z", "0.1",
                "--out", str(tmp_path / "x")])
    captured = capsys.readouterr()
    assert code == 2
    assert "g = " in captured.err


def test_family_tripartite_objective(tmp_path, capsys):
    out = str(tmp_path / "tri")
    code = run(["family", "tripartite", "--x", "0.25", "--z", "0.25", "--out", out])
    captured = capsys.readouterr()
    assert code == 0
    assert "predicted_objective=0.125" in captured.out


def test_certify_family_point(tmp_path, capsys):
    out = str(tmp_path / "fam")
    run(["family", "bipartite", "--x", "0.45", "--z", "0.45", "--out", out])
    capsys.readouterr()
    report_path = str(tmp_path / "report.json")
    code = run(["certify", out + ".behavior.json", "--settings", "1,1",
                "--level", "1ab", "--out", report_path])
    capsys.readouterr()
    assert code == 0
    rep = json.loads(open(report_path).read())
    assert rep["pg_upper"] <= 0.2505
    assert rep["min_entropy_bits"] >= 1.99
    assert rep["membership_status"] == "feasible"


def test_certify_invalid_behavior_exit_3(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"parties": 2, "inputs": 2, "outputs": 2, "p": {}}')
    code = run(["certify", str(bad)])
    captured = capsys.readouterr()
    assert code == 3


def test_certify_nonquantum_reports_membership(tmp_path, capsys):
    from maxrand.scenario import pr_box, write_behavior
    path = tmp_path / "pr.json"
    write_behavior(pr_box(), path)
    out = str(tmp_path / "rep.json")
    code = run(["certify", str(path), "--out", out])
    capsys.readouterr()
    assert code == 0
    rep = json.loads(open(out).read())
    assert rep["membership_status"] == "infeasible"
    assert rep["pg_upper"] is None
    assert rep["chsh"] == pytest.approx(4.0)


def test_sweep_fig3_only_feasible_rows(tmp_path, capsys):
    out = str(tmp_path / "f3.csv")
    code = run(["sweep", "fig3", "--grid", "3", "--out", out])
    capsys.readouterr()
    assert code == 0
    lines = open(out).read().strip().splitlines()
    assert lines[0] == "x,z,chsh"
    # grid {0, 0.25, 0.5}^2: feasible cells are (0.5, 0.25), (0.25, 0.5),
    # (0.5, 0.5) where g >= 0
    assert len(lines) == 4


def test_sweep_fig2_contains_extremes(tmp_path, capsys):
    out = str(tmp_path / "f2.csv")
    code = run(["sweep", "fig2", "--grid", "31", "--out", out])
    capsys.readouterr()
    assert code == 0
    rows = np.loadtxt(out, delimiter=",", skiprows=1)
    a2 = rows[:, 2]
    assert a2.min() < 0.05
    assert a2.max() > 0.45


def test_sweep_fig4_frontier_file(tmp_path, capsys):
    out = str(tmp_path / "f4.csv")
    code = run(["sweep", "fig4", "--grid", "9", "--out", out])
    capsys.readouterr()
    assert code == 0
    rows = np.loadtxt(out, delimiter=",", skiprows=1)
    front = np.loadtxt(str(tmp_path / "f4-frontier.csv"), delimiter=",", skiprows=1)
    assert front.shape[0] <= rows.shape[0]
    # corner present in the frontier
    d = np.abs(front[:, 2] - 1.0) + np.abs(front[:, 3] - 1 / np.sqrt(2))
    assert d.min() <= 1e-6


def test_sweep_unwritable_exit_4(tmp_path, capsys):
    code = run(["sweep", "fig3", "--grid", "3",
                "--out", str(tmp_path / "nodir" / "x.csv")])
    capsys.readouterr()
    assert code == 4


def test_sweep_deterministic_bytes(tmp_path, capsys):
    out1 = str(tmp_path / "a.csv")
    out2 = str(tmp_path / "b.csv")
    run(["sweep", "fig4", "--grid", "7", "--out", out1])
    run(["sweep", "fig4", "--grid", "7", "--out", out2])
    capsys.readouterr()
    assert open(out1, "rb").read() == open(out2, "rb").read()


def test_verify_tripartite_exit_codes(tmp_path, capsys):
    code = run(["verify-tripartite", "--x", "0.2", "--z", "0.2"])
    captured = capsys.readouterr()
    assert code == 2  # infeasible: g_T < 0
    out = str(tmp_path / "vt.json")
    code = run(["verify-tripartite", "--x", "0.24", "--z", "0.24",
                "--restarts", "6", "--out", out])
    capsys.readouterr()
    assert code == 0
    rep = json.loads(open(out).read())
    assert rep["relative_error"] <= 1e-5


def test_verify_tripartite_tolerance_failure_exit_5(tmp_path, capsys):
    # an unreachable tolerance exercises the verification-failure path
    out = str(tmp_path / "vt5.json")
    code = run(["verify-tripartite", "--x", "0.24", "--z", "0.24",
                "--restarts", "2", "--tol", "1e-13", "--out", out])
    captured = capsys.readouterr()
    assert code == 5
    assert "exceeds" in captured.err


def test_robustness_query(capsys):
    code = run(["robustness", "--n1", "1,0,0", "--n2", "0,0,1",
                "--method", "both", "--tol", "1e-6"])
    captured = capsys.readouterr()
    assert code == 0
    rep = json.loads(captured.out)
    assert rep["analytic"] == pytest.approx(1 / np.sqrt(2), abs=1e-9)
    assert abs(rep["sdp"] - rep["analytic"]) <= 1e-5


def test_robustness_bad_vector(capsys):
    code = run(["robustness", "--n1", "1,0", "--n2", "0,0,1"])
    capsys.readouterr()
    assert code == 2


def test_thread_cap_respected(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("MAXRAND_THREADS", "1")
    out = str(tmp_path / "t.csv")
    code = run(["sweep", "fig3", "--grid", "5", "--out", out])
    capsys.readouterr()
    assert code == 0
    monkeypatch.setenv("MAXRAND_THREADS", "0")
    out2 = str(tmp_path / "t2.csv")
    code = run(["sweep", "fig3", "--grid", "5", "--out", out2])
    capsys.readouterr()
    assert code == 0
    assert open(out).read() == open(out2).read()
