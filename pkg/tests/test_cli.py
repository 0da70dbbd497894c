import json
import os

import numpy as np
import pytest

import couette as C
from couette.cli import main


SOLVE_TOML = """
[grid]
nx = 16
ny = 32
lx = 12.566370614359172
ly = 6.283185307179586

[solver]
nu = 1e-2
dt = 0.05
t_max = 1.0
shift_policy = "truncate"

[initial]
amplitude = 1e-4
seed = 3

[sweep]
nus = [1e-2, 3e-2]
amplitudes = [1e-5, 1e-4]
"""


def test_unknown_flag_exits_1(capsys):
    assert main(["solve", "--no-such-flag"]) == 1
    assert "error" in capsys.readouterr().err


def test_missing_config_exits_1(capsys):
    assert main(["solve", "--config", "/no/such/file.toml"]) == 1


def test_incomplete_config_exits_1(tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("[grid]\nnx = 16\n")
    assert main(["solve", "--config", str(cfg)]) == 1


def test_solve_round_trip(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text(SOLVE_TOML)
    out = tmp_path / "out"
    assert main(["solve", "--config", str(cfg), "--out", str(out)]) == 0
    runs = os.listdir(out / "runs")
    assert len(runs) == 1
    assert "growth_factor" in capsys.readouterr().out


def test_sweep_command(tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text(SOLVE_TOML)
    out = tmp_path / "out"
    assert main(["sweep", "--config", str(cfg), "--out", str(out),
                 "--threads", "2"]) == 0
    assert (out / "sweep.csv").exists()
    assert len(os.listdir(out / "runs")) == 4


def test_linear_inviscid_fit(tmp_path):
    out = tmp_path / "out"
    assert main(["linear", "--fit", "inviscid", "--out", str(out)]) == 0
    with open(out / "linear_inviscid.json") as fh:
        report = json.load(fh)
    assert -2.3 <= report["power-law slope"] <= -1.7


def test_toy_command(tmp_path):
    out = tmp_path / "out"
    assert main(["toy", "--out", str(out), "--shells", "8", "16", "32"]) == 0
    assert (out / "toy_sweep.csv").exists()


def test_weights_lemma_check(tmp_path):
    out = tmp_path / "out"
    assert main(["weights", "--check-lemma21", "--samples", "500",
                 "--out", str(out)]) == 0
    text = (out / "lemma21_report.txt").read_text()
    assert "500/500" in text


def test_norms_command(tmp_path):
    g = C.make_grid(16, 32, 4 * np.pi, 2 * np.pi)
    f = C.make_initial_data(g, 1e-4, 3)
    ckpt = tmp_path / "state.ctl"
    C.save_checkpoint(ckpt, f, 1.0, 1e-3)
    out = tmp_path / "out"
    assert main(["norms", str(ckpt), "--out", str(out)]) == 0
    lines = (out / "norms_recomputed.csv").read_text().strip().splitlines()
    assert len(lines) == 2
