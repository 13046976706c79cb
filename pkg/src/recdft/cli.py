"""
Command line interface.

    recdft run CONFIG [--out-dir DIR] [--axis AXIS] [--trials N] [--seed S]
    recdft scenarios list
    recdft scenarios show NAME [--axis AXIS]
    recdft validate CONFIG

CONFIG is a config-file path or a preset name. Exit codes: 0 success,
1 configuration or usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace

from .config import AXES, PRESETS, ConfigError, dump_config, load_config, preset
from .harness import emit_csv, emit_trials_csv, run_sweep
from .plotting import emit_plot

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _build_parser():
    p = _Parser(prog="recdft", description="REC-DFT beamforming Monte Carlo harness")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a sweep and write CSV + SVG figures")
    run.add_argument("config", help="config file or preset name")
    run.add_argument("--out-dir", help="output directory (overrides [output] dir)")
    run.add_argument("--axis", choices=AXES, help="sweep axis when CONFIG is a preset")
    run.add_argument("--trials", type=int, help="override n_trials")
    run.add_argument("--seed", type=int, help="override master_seed")
    run.add_argument("--workers", type=int, help="worker processes")
    run.add_argument("--per-trial", action="store_true", help="also write per-trial records")

    sc = sub.add_parser("scenarios", help="built-in scenarios")
    scsub = sc.add_subparsers(dest="action", required=True, parser_class=_Parser)
    scsub.add_parser("list", help="list presets with their parameters")
    show = scsub.add_parser("show", help="print a preset as a config file")
    show.add_argument("name")
    show.add_argument("--axis", choices=AXES, default="snr")

    val = sub.add_parser("validate", help="check a config file")
    val.add_argument("config")
    return p


def _resolve(target, axis=None):
    if target in PRESETS and not os.path.exists(target):
        return preset(target, axis=axis or "snr")
    if axis is not None:
        raise ConfigError("--axis only applies to preset names")
    try:
        return load_config(target)
    except OSError as exc:
        raise ConfigError(f"cannot read {target}: {exc.strerror}") from None


def _describe(cfg):
    mm = cfg.mismatch
    params = {
        "random_look_direction": f"DoA error U[-{mm.look_halfwidth_deg:g}, {mm.look_halfwidth_deg:g}] deg on all sources",
        "incoherent_scattering": f"{mm.n_paths} extra incoherent paths, std {mm.path_std_deg:g} deg",
        "wavefront_distortion": f"accumulated phase increments, std {mm.phase_std:g} rad",
        "coherent_scattering": f"{mm.n_paths} coherent paths, std {mm.path_std_deg:g} deg, phases U[0, 2pi]",
        "none": "no mismatch",
    }[mm.kind]
    intf = ", ".join(f"{d:g}" for d in cfg.interferer_doas_deg)
    inr = ", ".join(f"{d:g}" for d in cfg.inr_db)
    return (
        f"{cfg.name:12s} {mm.kind}: {params}\n"
        f"{'':12s} N={cfg.n_sensors}, SOI {cfg.soi_doa_deg:g} deg, interferers [{intf}] deg at INR [{inr}] dB,\n"
        f"{'':12s} sector +-{cfg.soi_sector_halfwidth_deg:g} deg, K={cfg.snapshots[0]}, "
        f"N_DFT={cfg.n_dft[0]}, {cfg.n_trials} trials"
    )


def _cmd_run(args):
    cfg = _resolve(args.config, args.axis)
    overrides = {}
    if args.trials is not None:
        overrides["n_trials"] = args.trials
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.workers is not None:
        overrides["workers"] = args.workers
    if overrides:
        cfg = replace(cfg, **overrides)
    out_dir = args.out_dir or cfg.output_dir
    stem = f"{cfg.name}_{cfg.axis}"
    try:
        os.makedirs(out_dir, exist_ok=True)
        result = run_sweep(cfg)
        csv_path = os.path.join(out_dir, stem + ".csv")
        emit_csv(result, csv_path)
        emit_plot(result, os.path.join(out_dir, stem + "_sinr.svg"), mode="sinr")
        emit_plot(result, os.path.join(out_dir, stem + "_deviation.svg"), mode="deviation")
        if args.per_trial:
            emit_trials_csv(result, os.path.join(out_dir, stem + "_trials.csv"))
    except OSError as exc:
        print(f"recdft: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    failed = sum(c.n_failed for c in result.cells.values())
    print(f"wrote {csv_path} ({len(result.cells)} cells, {failed} failed trials, "
          f"{result.n_loaded} loaded reconstructions)")
    return EXIT_OK


def _cmd_scenarios(args):
    if args.action == "list":
        for name in PRESETS:
            print(_describe(PRESETS[name]))
        return EXIT_OK
    print(dump_config(preset(args.name, axis=args.axis)))
    return EXIT_OK


def _cmd_validate(args):
    cfg = _resolve(args.config)
    print(f"ok: {cfg.name}, axis={cfg.axis} ({len(cfg.axis_values)} points), "
          f"{cfg.n_trials} trials, methods={','.join(cfg.methods)}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": _cmd_run, "scenarios": _cmd_scenarios, "validate": _cmd_validate}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"recdft: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - reported as a runtime failure
        print(f"recdft: runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
