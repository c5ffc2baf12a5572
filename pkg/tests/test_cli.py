import json

import numpy as np
import pytest

from balcon.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_tangents_json(capsys):
    code, out, _ = run(capsys, "tangents", "--masses", "1,2,3,4")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == 1
    roots = payload["roots"]
    assert len(roots) == 3 and all(r < 0 for r in roots)
    for t in payload["tangents"]:
        assert max(t["polynomial_residuals"]) < 1e-9


def test_matrices_tetra_equal_masses(capsys):
    code, out, _ = run(capsys, "matrices", "--masses", "1,1,1,1", "--tetra")
    assert code == 0
    payload = json.loads(out)
    b = np.array(payload["inertia"])
    a = np.array(payload["force"])
    assert np.max(np.abs(b - 0.5 * np.eye(3))) < 1e-12
    assert np.max(np.abs(a + 2.0 * np.eye(3))) < 1e-12  # M = 4
    assert payload["inertia_trace"] == pytest.approx(1.5)


def test_balance_check(capsys):
    code, out, _ = run(capsys, "balance-check", "--masses", "1,2,3,4", "--tetra")
    assert code == 0
    payload = json.loads(out)
    assert payload["balanced"] is True
    assert abs(payload["alternating_sum"]) < 1e-12


def test_degeneracy_matrix_input(capsys):
    code, out, _ = run(capsys, "degeneracy", "--matrix", "1,1,2,0,0,0")
    assert code == 0
    payload = json.loads(out)
    assert payload["degenerate"] is True
    code, out, _ = run(capsys, "degeneracy", "--masses", "1,2,3,4", "--tetra")
    payload = json.loads(out)
    assert payload["degenerate"] is True  # scalar force matrix at the tetrahedron


def test_continue_writes_csv_and_figure(tmp_path, capsys):
    prefix = str(tmp_path / "run")
    code, out, _ = run(
        capsys,
        "continue", "--masses", "1,2,1,2", "--root", "0",
        "--steps", "5", "--h", "1e-3", "--out", prefix,
    )
    assert code == 0
    csv_path = tmp_path / "run-branch0.csv"
    assert csv_path.exists()
    lines = csv_path.read_text().splitlines()
    assert lines[0].split(",") == [
        "arclength", "a", "b1", "b2", "d1", "d2", "f",
        "lambda1", "lambda2", "lambda3", "gap", "balance_residual",
        "cayley_menger",
    ]
    assert len(lines) == 6
    assert (tmp_path / "run-branch0.png").exists()
    assert (tmp_path / "run-branch0.json").exists()


def test_continue_stdout_without_out(capsys):
    code, out, _ = run(
        capsys, "continue", "--masses", "1,2,1,2", "--root", "0", "--steps", "3"
    )
    assert code == 0
    assert out.splitlines()[0].startswith("arclength,a,b1,")


def test_polytope_deterministic_csv(tmp_path, capsys):
    args = [
        "polytope", "--masses", "1,1,1,1", "--samples", "50", "--seed", "7",
    ]
    p1 = str(tmp_path / "one")
    p2 = str(tmp_path / "two")
    assert run(capsys, *args, "--out", p1)[0] == 0
    assert run(capsys, *args, "--out", p2)[0] == 0
    c1 = (tmp_path / "one-frequencies.csv").read_bytes()
    c2 = (tmp_path / "two-frequencies.csv").read_bytes()
    assert c1 == c2
    payload = json.loads((tmp_path / "one-polytope.json").read_text())
    assert payload["horn_violations"] == 0
    assert (tmp_path / "one-frequencies.png").exists()


def test_simulate_balanced_rhombus(tmp_path, capsys):
    code, out, _ = run(
        capsys,
        "simulate", "--masses", "1,2,1,2",
        "--distances2", "1,1,1,1,1,0.8",
        "--dim", "4", "--periods", "0.5", "--dt-per-period", "2000",
        "--out", str(tmp_path / "sim"),
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["distance_drift"] < 1e-8
    assert (tmp_path / "sim-trajectory.csv").exists()
    assert (tmp_path / "sim-trajectory.png").exists()


def test_simulate_polish_recovers_rounded_shape(capsys):
    # a branch point quoted at 6 digits is no longer balanced to 1e-8;
    # --polish re-solves the defining equations before building
    from balcon.continuation import continue_branch
    from balcon.massspace import MassSystem

    br = continue_branch(MassSystem((1.0, 2.0, 3.0, 4.5)), 0, steps=10, h=1e-3)
    rounded = ",".join(f"{v:.5f}" for v in br.points[-1].s.vec())
    args = [
        "simulate", "--masses", "1,2,3,4.5", "--distances2", rounded,
        "--dim", "4", "--periods", "0.2", "--dt-per-period", "1000",
    ]
    code, _, err = run(capsys, *args)
    assert code == 3 and "not balanced" in err
    code, out, _ = run(capsys, *args, "--polish")
    assert code == 0
    assert json.loads(out)["distance_drift"] < 1e-8


def test_simulate_unbalanced_is_numerical_failure(capsys):
    code, _, err = run(
        capsys,
        "simulate", "--masses", "1,2,3,4",
        "--distances2", "1.3,1,1,1,1,1", "--dim", "6",
    )
    assert code == 3
    assert "not balanced" in err


def test_planar_scan_and_point(tmp_path, capsys):
    code, out, _ = run(
        capsys,
        "planar", "--m1", "2.0", "--scan", "0.4:2.6:12",
        "--out", str(tmp_path / "pl"),
    )
    assert code == 0
    payload = json.loads(out)
    assert 0.57 < payload["gamma"] < 0.58
    assert payload["central_rhombus"]["jacobian_det"] > 0
    assert (tmp_path / "pl-scan.csv").exists()
    assert (tmp_path / "pl-scan.png").exists()


def test_config_file_input(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"masses": [1, 1, 1, 1], "distances2": {
        "a": 1, "b1": 1, "b2": 1, "d1": 1, "d2": 1, "f": 1}}))
    code, out, _ = run(capsys, "matrices", "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["inertia_trace"] == pytest.approx(1.5)


def test_bad_inputs_exit_2(tmp_path, capsys):
    assert run(capsys, "matrices", "--masses", "1,z,3,4", "--tetra")[0] == 2
    assert run(capsys, "matrices", "--masses", "1,-2,3,4", "--tetra")[0] == 2
    assert run(capsys, "matrices", "--masses", "1,2,3,4")[0] == 2  # no shape
    assert (
        run(
            capsys, "matrices", "--masses", "1,2,3,4", "--tetra",
            "--distances2", "1,1,1,1,1,1",
        )[0]
        == 2
    )  # ambiguous shape
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert run(capsys, "matrices", "--config", str(bad))[0] == 2


def test_verify_all_single_criterion(capsys):
    code, out, _ = run(capsys, "verify-all", "--only", "1")
    assert code == 0
    assert "[PASS]  1" in out


def test_float_format_roundtrips(capsys):
    _, out, _ = run(capsys, "matrices", "--masses", "1,2,3,4", "--tetra")
    payload = json.loads(out)
    # 17 significant digits: -(M/2) reproduced exactly
    assert payload["force"][0][0] == -5.0
