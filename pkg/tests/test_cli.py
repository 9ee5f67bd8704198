import csv
import hashlib
import json
import subprocess
import sys

import pytest

from hardwall.cli import main, run

SMALL = {
    "equilibrium": {},
    "norms": {"N": [40]},
    "kernel": {"N": [40, 80], "grids": {"x": {"linspace": [0.5, 2, 5]}}},
    "profile": {"N": [30], "grids": {"r": {"linspace": [0.05, 0.75, 8]}}},
    "limit-density": {"alphas": [0, 1], "grids": {"x": [0.1, 1.0, 3.0]}},
    "massone-check": {"alphas": [0], "direct": False, "grids": {"x": [0.5, 1.0]}},
    "ward-check": {"alphas": [0], "grids": {"x": [0.5, 1.0]}},
    "maxmod": {"N": [40], "grids": {"x": [0.0, 0.5, 1.0]}},
    "sample": {"N": [10], "count": 5, "seed": 3, "nodes_per_degree": 256},
    "sample-maxmod": {"N": [10], "count": 50, "seed": 3, "nodes_per_degree": 256},
}


def write_cfg(tmp_path, d, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(d))
    return p


@pytest.mark.parametrize("command", sorted(SMALL))
def test_each_command(tmp_path, command):
    cfg = write_cfg(tmp_path, {"command": command, **SMALL[command]})
    out = tmp_path / "out"
    assert main([command, "--config", str(cfg), "--out", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == command
    for a in manifest["artifacts"]:
        data = (out / a["path"]).read_bytes()
        assert hashlib.sha256(data).hexdigest() == a["sha256"] and len(data) == a["bytes"]
        if a["path"].endswith(".csv"):
            header = next(csv.reader(data.decode().splitlines()))
            assert all("[" in h and h.endswith("]") for h in header)


def test_run_dispatches_on_config(tmp_path):
    cfg = write_cfg(tmp_path, {"command": "equilibrium"})
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    s = json.loads((tmp_path / "o" / "equilibrium_summary.json").read_text())
    assert s["tau_star"] == pytest.approx(0.64) and s["total_mass"] == pytest.approx(1.0)


def test_invalid_inputs_exit_one_without_output(tmp_path):
    for d in ({"command": "norms", "rho_star": 1.2}, {"command": "norms", "bogus": 1}):
        cfg = write_cfg(tmp_path, d)
        out = tmp_path / "nothing"
        assert run(cfg, out=str(out)) == 1
        assert not out.exists()
    cfg = write_cfg(tmp_path, {"command": "norms"})
    assert run(cfg, "kernel", out=str(tmp_path / "x")) == 1


def test_sample_replay_is_byte_identical(tmp_path):
    cfg = write_cfg(tmp_path, {"command": "sample", **SMALL["sample"]})
    assert run(cfg, out=str(tmp_path / "a")) == 0
    assert run(cfg, out=str(tmp_path / "b"), threads=2) == 0
    assert (tmp_path / "a" / "samples.csv").read_bytes() == (tmp_path / "b" / "samples.csv").read_bytes()


def test_console_entry_point(tmp_path):
    cfg = write_cfg(tmp_path, {"command": "limit-density", "grids": {"x": [1.0]}})
    proc = subprocess.run(
        [sys.executable, "-m", "hardwall.cli", "limit-density", "--config", str(cfg), "--out", str(tmp_path / "o")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
