import csv
import json
import math

import numpy as np
import pytest

from qflow.cli import (DEFAULT_SEED, EXIT_IO, EXIT_OK, EXIT_ORDER, EXIT_PARSE,
                       EXIT_TOLERANCE, main)


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_eigen_dist(tmp_path):
    out = tmp_path / "eig.csv"
    assert main(["eigen-dist", "-o", str(out), "--tau-steps", "4"]) == EXIT_OK
    header, rows = read_csv(out)
    assert header == ["tau", "q_m", "density"]
    assert len(rows) == 5 * 201
    meta = json.loads((tmp_path / "eig.csv.meta.json").read_text())
    assert meta["figure"] == "eigen_dist"
    assert meta["seed"] == DEFAULT_SEED
    # tau = 0, q0 = 1 row set peaks at q_m = 1 with the unit-variance density
    tau0 = [(float(r[1]), float(r[2])) for r in rows if float(r[0]) == 0.0]
    peak = max(tau0, key=lambda t: t[1])
    assert peak[0] == pytest.approx(1.0, abs=0.02)
    assert peak[1] == pytest.approx(1.0 / math.sqrt(2 * math.pi), rel=1e-3)


def test_trajectories_and_determinism(tmp_path):
    args = ["trajectories", "--n-traj", "4", "--n-steps", "200",
            "--tau-f", "2.0"]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["-o", str(out1)]) == EXIT_OK
    assert main(args + ["-o", str(out2)]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()
    header, rows = read_csv(out1)
    assert header == ["tau", "traj_id", "q", "q_m"]
    assert len(rows) == 4 * 201
    # q_m = q / e^tau on every row
    for r in rows[::37]:
        tau, _, q, qm = float(r[0]), r[1], float(r[2]), float(r[3])
        assert qm == pytest.approx(q * math.exp(-tau), rel=1e-12)
    different = tmp_path / "c.csv"
    assert main(args + ["-o", str(different), "--seed", "1"]) == EXIT_OK
    assert out1.read_bytes() != different.read_bytes()


def test_trajectories_empty(tmp_path):
    out = tmp_path / "empty.csv"
    assert main(["trajectories", "--n-traj", "0", "-o", str(out)]) == EXIT_OK
    header, rows = read_csv(out)
    assert header == ["tau", "traj_id", "q", "q_m"]
    assert rows == []


def test_spin_dist(tmp_path):
    out = tmp_path / "spin.csv"
    assert main(["spin-dist", "--gains", "5", "-o", str(out)]) == EXIT_OK
    header, rows = read_csv(out)
    assert header == ["G", "sigma_m", "density"]
    vals = np.array([[float(r[1]), float(r[2])] for r in rows])
    # two peaks at +-1 with std 1/(sqrt(2) * 5)
    peak = vals[np.argmax(vals[:, 1]), 0]
    assert abs(abs(peak) - 1.0) < 0.02
    expect_peak = 1.0 / math.sqrt(2 * math.pi * (1.0 / 50.0)) * 0.5
    assert np.max(vals[:, 1]) == pytest.approx(expect_peak, rel=1e-2)


def test_bell_csv(tmp_path):
    out = tmp_path / "bell.csv"
    assert main(["bell", "--n-g", "3", "--n-samples", "2000",
                 "-o", str(out)]) == EXIT_OK
    header, rows = read_csv(out)
    assert header == ["G", "B_analytic", "B_mc", "stderr"]
    assert len(rows) == 3
    for r in rows:
        assert abs(float(r[1]) - float(r[2])) < 5 * float(r[3])


def test_bell_analytic_only(tmp_path):
    out = tmp_path / "bell0.csv"
    assert main(["bell", "--n-g", "2", "--n-samples", "0",
                 "-o", str(out)]) == EXIT_OK
    _, rows = read_csv(out)
    for r in rows:
        assert r[2] == "" and r[3] == ""


def test_json_format(tmp_path):
    out = tmp_path / "bell.json"
    assert main(["bell", "--n-g", "2", "--n-samples", "100", "--format",
                 "json", "-o", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["columns"] == ["G", "B_analytic", "B_mc", "stderr"]
    assert len(doc["rows"]) == 2
    assert list(doc.keys()) == sorted(doc.keys())


def test_derive_fpe(capsys):
    assert main(["derive-fpe", "0.5i*adag^2 - 0.5i*a^2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "dQ/dtau = [dp.p + dp^2 - dq.q - dq^2] Q" in out.splitlines()[0]
    machine = json.loads(out.splitlines()[1])
    assert machine["variables"] == ["q", "p"]


def test_exit_codes(tmp_path, capsys):
    assert main(["derive-fpe", "0.5i*adag^"]) == EXIT_PARSE
    assert main(["derive-fpe", "adag^3 + a^3"]) == EXIT_ORDER
    assert main(["bell", "--n-g", "1", "--n-samples", "10",
                 "-o", str(tmp_path / "no" / "dir.csv")]) == EXIT_IO
    err = capsys.readouterr().err
    assert "dir.csv" in err


def test_verify(capsys):
    assert main(["verify", "--n-points", "3"]) == EXIT_OK
    assert main(["verify", "--n-points", "3",
                 "--tolerance", "1e-16"]) == EXIT_TOLERANCE


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n_traj = 2\nn-steps = 100  # comment\ntau_f = 1.0\n")
    out = tmp_path / "cfg.csv"
    assert main(["trajectories", "--config", str(cfg), "--n-traj", "3",
                 "-o", str(out)]) == EXIT_OK
    _, rows = read_csv(out)
    assert len(rows) == 3 * 101  # flag wins over config for n_traj
    assert main(["trajectories", "--config", str(tmp_path / "nope.cfg"),
                 "-o", str(out)]) == EXIT_IO
