"""Command-line front end: simulate | rdmap | roc | plot.

Exit codes: 0 success, 2 configuration/usage problems (bad config keys,
missing files, malformed CSV), 3 runtime pipeline failures.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .channel import (
    add_awgn,
    draw_channel_gain,
    path_loss_gain,
    synth_target,
    wavelength_m,
    write_grid_bin,
    write_grid_csv,
)
from .configio import (
    detector_mode_from,
    genie_flags_from,
    make_manifest,
    ofdm_config_from,
    resolve_config,
    scenario_from,
    snr_list_from,
    write_manifest,
)
from .errors import ConfigurationError, OfdmJrcError
from .montecarlo import roc_sweep, run_trial, write_roc_csv
from .rdmap import (
    fast_time_dft,
    range_doppler_map,
    remove_known_symbols,
    resolution_summary,
    write_rdmap_csv,
)
from .svgplot import parse_roc_csv, render_roc_svg
from .waveform import active_subcarriers, generate_frame, write_frame_csv


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _check_config_path(config_path):
    if config_path is not None and not os.path.isfile(config_path):
        raise FileNotFoundError(config_path)


def _estimates_dict(est):
    if est is None:
        return None
    return {
        "r0_hat_m": est.r0_hat_m,
        "v_hat_mps": est.v_hat_mps,
        "f_cfo_hat_hz": est.f_cfo_hat_hz,
        "residual_norm": est.residual_norm,
        "hypothesis": est.hypothesis,
    }


def _trial_dict(rec):
    out = {
        "scenario": {
            "kind": rec.scenario.kind.value,
            "r0_m": rec.scenario.r0_m,
            "v_mps": rec.scenario.v_mps,
            "f_cfo_hz": rec.scenario.f_cfo_hz,
            "sigma_rcs_m2": rec.scenario.sigma_rcs_m2,
            "snr_db": rec.scenario.snr_db,
        },
        "seed": rec.seed,
        "genie": rec.genie,
        "truth": rec.truth.value,
        "valid": rec.valid,
        "error": rec.error,
        "t_stat": rec.t_stat if rec.valid and math.isfinite(rec.t_stat) else None,
        "est_h0": _estimates_dict(rec.est0),
        "est_h1": _estimates_dict(rec.est1),
    }
    if rec.outcome is not None:
        out["decision"] = rec.outcome.decision.value
        out["threshold"] = rec.outcome.threshold
        out["mode"] = rec.outcome.mode
    return out


def _write_freq_csv(path, y_tilde) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("k,m,re,im\n")
        for ki in range(y_tilde.shape[0]):
            for m in range(y_tilde.shape[1]):
                val = y_tilde[ki, m]
                fh.write(f"{ki},{m},{float(val.real)!r},{float(val.imag)!r}\n")


def _pipeline_grids(cfg, scenario):
    """Frame, noisy sample grid, and symbol-removed grid for one scenario."""
    ss = np.random.SeedSequence(scenario.seed)
    frame_ss, gain_ss, noise_ss = ss.spawn(3)
    frame = generate_frame(cfg, np.random.default_rng(frame_ss))
    big_g = path_loss_gain(wavelength_m(cfg.f_c_hz),
                           scenario.sigma_rcs_m2, scenario.r0_m)
    gain = draw_channel_gain(big_g, scenario, cfg,
                             np.random.default_rng(gain_ss))
    grid = synth_target(cfg, scenario, frame, gain)
    noisy = add_awgn(grid, scenario.snr_db, np.random.default_rng(noise_ss))
    fg = remove_known_symbols(fast_time_dft(noisy, cfg), frame)
    return frame, noisy, fg


def cmd_simulate(config_path, overrides=(), out_dir=".", seed: int = 0) -> int:
    """Run one trial and write its record (plus optional grid dumps)."""
    try:
        _check_config_path(config_path)
        cfg_map = resolve_config(config_path, overrides)
        cfg = ofdm_config_from(cfg_map)
        scenario = scenario_from(cfg_map, seed=seed)
        mode = detector_mode_from(cfg_map)
        rec = run_trial(cfg, scenario, genie=False, mode=mode,
                        cfo_floor_hz=cfg_map["detector.cfo_floor_hz"],
                        gamma_prime=cfg_map["detector.gamma_prime"])
        os.makedirs(out_dir, exist_ok=True)
        outputs = []
        trial_path = os.path.join(out_dir, "trial.json")
        with open(trial_path, "w", encoding="utf-8") as fh:
            json.dump(_trial_dict(rec), fh, indent=2, sort_keys=True)
            fh.write("\n")
        outputs.append(trial_path)
        if cfg_map["io.dump_grids"]:
            frame, noisy, fg = _pipeline_grids(cfg, scenario)
            frame_path = os.path.join(out_dir, "frame.csv")
            write_frame_csv(frame_path, frame, active_subcarriers(cfg))
            grid_csv = os.path.join(out_dir, "sample_grid.csv")
            write_grid_csv(grid_csv, noisy)
            grid_bin = os.path.join(out_dir, "sample_grid.bin")
            write_grid_bin(grid_bin, noisy)
            freq_csv = os.path.join(out_dir, "freq_grid.csv")
            _write_freq_csv(freq_csv, fg.y_tilde)
            outputs += [frame_path, grid_csv, grid_bin, freq_csv]
        manifest_path = os.path.join(out_dir, "manifest.json")
        write_manifest(manifest_path,
                       make_manifest("simulate", cfg_map, seed, outputs))
        if rec.valid:
            print(f"decision: {rec.outcome.decision.value} "
                  f"(t_stat={rec.t_stat:.6g}); wrote {trial_path}")
        else:
            print(f"trial invalid: {rec.error}; wrote {trial_path}")
        return 0
    except FileNotFoundError as exc:
        return _fail(f"config not found: {exc}", 2)
    except ConfigurationError as exc:
        return _fail(str(exc), 2)
    except OfdmJrcError as exc:
        return _fail(str(exc), 3)


def cmd_rdmap(config_path, overrides=(), out_dir=".", seed: int = 0) -> int:
    """Write the zero-padded range-Doppler map for one scenario draw."""
    try:
        _check_config_path(config_path)
        cfg_map = resolve_config(config_path, overrides)
        cfg = ofdm_config_from(cfg_map)
        scenario = scenario_from(cfg_map, seed=seed)
        _, _, fg = _pipeline_grids(cfg, scenario)
        rdm = range_doppler_map(fg, cfg)
        os.makedirs(out_dir, exist_ok=True)
        map_path = os.path.join(out_dir, "rdmap.csv")
        write_rdmap_csv(map_path, rdm)
        manifest_path = os.path.join(out_dir, "manifest.json")
        write_manifest(manifest_path,
                       make_manifest("rdmap", cfg_map, seed, [map_path]))
        peak = rdm.peak()
        print(f"peak at delay={peak[0]:.4g} s, doppler={peak[1]:.4g} Hz; "
              f"wrote {map_path}")
        for key, value in resolution_summary(cfg).items():
            print(f"{key} = {value:.6g}")
        return 0
    except FileNotFoundError as exc:
        return _fail(f"config not found: {exc}", 2)
    except ConfigurationError as exc:
        return _fail(str(exc), 2)
    except OfdmJrcError as exc:
        return _fail(str(exc), 3)


def cmd_roc(config_path, out_csv, overrides=(), seed: int = 0,
            workers: int = 1) -> int:
    """Run the configured ROC sweep and write the CSV plus a manifest."""
    try:
        _check_config_path(config_path)
        cfg_map = resolve_config(config_path, overrides)
        cfg = ofdm_config_from(cfg_map)
        base = scenario_from(cfg_map, seed=0)
        mode = detector_mode_from(cfg_map)
        snrs = snr_list_from(cfg_map)
        n_trials = int(cfg_map["mc.n_trials"])
        curves = []
        for genie in genie_flags_from(cfg_map):
            curves += roc_sweep(cfg, snrs, None, n_trials, genie,
                                base_scenario=base, master_seed=seed,
                                mode=mode,
                                cfo_floor_hz=cfg_map["detector.cfo_floor_hz"],
                                workers=workers)
        out_dir = os.path.dirname(os.path.abspath(out_csv))
        os.makedirs(out_dir, exist_ok=True)
        write_roc_csv(out_csv, curves)
        manifest_path = os.path.join(out_dir, "manifest.json")
        write_manifest(manifest_path,
                       make_manifest("roc", cfg_map, seed, [out_csv]))
        total = sum(2 * c.n_trials for c in curves)
        print(f"wrote {out_csv} ({len(curves)} curves, {total} trials)")
        return 0
    except FileNotFoundError as exc:
        return _fail(f"config not found: {exc}", 2)
    except ConfigurationError as exc:
        return _fail(str(exc), 2)
    except OfdmJrcError as exc:
        return _fail(str(exc), 3)


def cmd_plot(csv_path, out_svg) -> int:
    """Render a ROC CSV to an SVG plot."""
    try:
        if not os.path.isfile(csv_path):
            return _fail(f"csv not found: {csv_path}", 2)
        groups = parse_roc_csv(csv_path)
        out_dir = os.path.dirname(os.path.abspath(out_svg))
        os.makedirs(out_dir, exist_ok=True)
        render_roc_svg(out_svg, groups)
        print(f"wrote {out_svg} ({len(groups)} curves)")
        return 0
    except ConfigurationError as exc:
        return _fail(str(exc), 2)
    except OfdmJrcError as exc:
        return _fail(str(exc), 3)


def _add_common(parser: argparse.ArgumentParser, workers: bool = False) -> None:
    parser.add_argument("--config", default=None, help="config file path")
    parser.add_argument("--set", dest="overrides", action="append",
                        default=[], metavar="KEY=VALUE",
                        help="override one config key (repeatable)")
    parser.add_argument("--seed", type=int, default=0,
                        help="master seed (unsigned 64-bit)")
    parser.add_argument("--out", default=".", help="output directory")
    if workers:
        parser.add_argument("--workers", type=int,
                            default=os.cpu_count() or 1,
                            help="parallel worker processes")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ofdmjrc",
        description="OFDM joint radar-communication simulator: single "
                    "trials, range-Doppler maps, ROC sweeps, and plots.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one trial")
    _add_common(p_sim)

    p_map = sub.add_parser("rdmap", help="export a range-Doppler map")
    _add_common(p_map)

    p_roc = sub.add_parser("roc", help="run a Monte Carlo ROC sweep")
    _add_common(p_roc, workers=True)

    p_plot = sub.add_parser("plot", help="render a ROC CSV to SVG")
    p_plot.add_argument("csv", help="ROC CSV produced by the roc command")
    p_plot.add_argument("--out", default=".", help="output directory")

    args = parser.parse_args(argv)
    if args.command == "simulate":
        return cmd_simulate(args.config, args.overrides, args.out, args.seed)
    if args.command == "rdmap":
        return cmd_rdmap(args.config, args.overrides, args.out, args.seed)
    if args.command == "roc":
        out_csv = os.path.join(args.out, "roc.csv")
        return cmd_roc(args.config, out_csv, args.overrides, args.seed,
                       args.workers)
    out_svg = os.path.join(args.out, "roc.svg")
    return cmd_plot(args.csv, out_svg)


if __name__ == "__main__":
    sys.exit(main())
