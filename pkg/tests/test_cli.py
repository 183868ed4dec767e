from __future__ import annotations

import json
import subprocess
import sys

import pytest


def _run(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "ofdmjrc", *args],
                          capture_output=True, text=True, cwd=cwd)


def _write_cfg(tmp_path, text=""):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    return str(path)


def test_simulate_writes_trial_and_manifest(tmp_path):
    cfg = _write_cfg(tmp_path)
    out = tmp_path / "out"
    proc = _run("simulate", "--config", cfg, "--out", str(out), "--seed", "2")
    assert proc.returncode == 0, proc.stderr
    trial = json.loads((out / "trial.json").read_text())
    assert trial["valid"] is True
    assert trial["decision"] in ("h0_false_target", "h1_real_target")
    assert trial["scenario"]["kind"] == "false"
    assert trial["seed"] == 2
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["subcommand"] == "simulate"
    assert manifest["master_seed"] == 2
    assert any(p.endswith("trial.json") for p in manifest["outputs"])


def test_simulate_reports_missing_config(tmp_path):
    proc = _run("simulate", "--config", str(tmp_path / "nope.cfg"))
    assert proc.returncode == 2
    assert "config not found" in proc.stderr


def test_override_beats_config_file(tmp_path):
    cfg = _write_cfg(tmp_path, "scenario.snr_db = 5\nscenario.r0_m = 150\n")
    out = tmp_path / "out"
    proc = _run("simulate", "--config", cfg, "--set", "scenario.snr_db=7",
                "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    trial = json.loads((out / "trial.json").read_text())
    assert trial["scenario"]["snr_db"] == 7.0  # --set wins over the file
    assert trial["scenario"]["r0_m"] == 150.0  # file wins over defaults


def test_contradictory_scenario_is_rejected(tmp_path):
    cfg = _write_cfg(tmp_path)
    proc = _run("simulate", "--config", cfg,
                "--set", "scenario.kind=real", "--set", "scenario.f_cfo_hz=5e3")
    assert proc.returncode == 2
    assert "error:" in proc.stderr


def test_unknown_config_key_is_rejected(tmp_path):
    cfg = _write_cfg(tmp_path, "scenario.warp_factor = 9\n")
    proc = _run("simulate", "--config", cfg)
    assert proc.returncode == 2
    assert "warp_factor" in proc.stderr


def test_dump_grids_writes_side_files(tmp_path):
    cfg = _write_cfg(tmp_path, "io.dump_grids = true\n")
    out = tmp_path / "out"
    proc = _run("simulate", "--config", cfg, "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    for name in ("frame.csv", "sample_grid.csv", "sample_grid.bin",
                 "freq_grid.csv"):
        assert (out / name).exists(), name


def test_rdmap_outputs_csv(tmp_path):
    cfg = _write_cfg(tmp_path, "ofdm.zero_pad = 2\n")
    out = tmp_path / "out"
    proc = _run("rdmap", "--config", cfg, "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    lines = (out / "rdmap.csv").read_text().splitlines()
    assert lines[0] == "delay_s,doppler_hz,magnitude"
    assert "peak" in proc.stdout


def test_roc_then_plot_round_trip(tmp_path):
    cfg = _write_cfg(tmp_path, "mc.n_trials = 6\nmc.snr_db_list = 9\n")
    out = tmp_path / "out"
    proc = _run("roc", "--config", cfg, "--out", str(out), "--workers", "2")
    assert proc.returncode == 0, proc.stderr
    csv_path = out / "roc.csv"
    header = csv_path.read_text().splitlines()[0]
    assert header.startswith("snr_db,genie,gamma,p_fa,p_d")

    plot = _run("plot", str(csv_path), "--out", str(out))
    assert plot.returncode == 0, plot.stderr
    svg = (out / "roc.svg").read_text()
    assert svg.lstrip().startswith("<svg")
    assert "polyline" in svg
    # bottom-left data corner of the unit square in pixel coordinates
    assert "70.00,420.00" in svg


def test_plot_reports_missing_csv(tmp_path):
    proc = _run("plot", str(tmp_path / "nope.csv"), "--out", str(tmp_path))
    assert proc.returncode == 2
    assert "not found" in proc.stderr


def test_plot_rejects_malformed_rows(tmp_path):
    bad = tmp_path / "roc.csv"
    bad.write_text(
        "snr_db,genie,gamma,p_fa,p_d,p_fa_lo,p_fa_hi,p_d_lo,p_d_hi,n_trials\n"
        "9.0,false,0.0,1.0,1.0,0.9,1.0,0.9,1.0,10\n"
        "9.0,false,0.1,not_a_number,1.0,0.9,1.0,0.9,1.0,10\n"
    )
    proc = _run("plot", str(bad), "--out", str(tmp_path))
    assert proc.returncode == 2
    assert "row 3" in proc.stderr


def test_plot_rejects_empty_body(tmp_path):
    empty = tmp_path / "roc.csv"
    empty.write_text(
        "snr_db,genie,gamma,p_fa,p_d,p_fa_lo,p_fa_hi,p_d_lo,p_d_hi,n_trials\n")
    proc = _run("plot", str(empty), "--out", str(tmp_path))
    assert proc.returncode == 2


def test_roc_csv_identical_across_worker_counts(tmp_path):
    cfg = _write_cfg(tmp_path, "mc.n_trials = 5\nmc.snr_db_list = 9\n"
                               "mc.genie = estimated\n")
    out1 = tmp_path / "w1"
    out2 = tmp_path / "w2"
    p1 = _run("roc", "--config", cfg, "--out", str(out1),
              "--seed", "11", "--workers", "1")
    p2 = _run("roc", "--config", cfg, "--out", str(out2),
              "--seed", "11", "--workers", "4")
    assert p1.returncode == 0 and p2.returncode == 0
    assert (out1 / "roc.csv").read_bytes() == (out2 / "roc.csv").read_bytes()


def test_cli_help_lists_subcommands():
    proc = _run("--help")
    assert proc.returncode == 0
    for sub in ("simulate", "rdmap", "roc", "plot"):
        assert sub in proc.stdout
