"""Command-line benchmark runner.

    sigspace list-presets
    sigspace run --preset table1 [--trials N] [--seed S] [--jobs P]
                 [--out results.csv] [--svg plot.svg]
    sigspace run --config experiment.json [same overrides]

The JSON config mirrors ExperimentConfig field names; signal classes are
given as identifiers like ``clustered`` or ``c_clusters:4``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .harness import (
    PRESET_NAMES,
    ExperimentConfig,
    Sweep,
    emit_csv,
    emit_svg,
    preset,
    run_experiment,
)
from .signals import parse_structure


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Build an ExperimentConfig from parsed JSON."""
    known = {
        "name", "algorithms", "signals", "sweep", "n", "d", "k", "m",
        "trials", "master_seed", "nomp_window", "epsilon",
    }
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config fields: {sorted(unknown)}")
    for required in ("algorithms", "signals", "sweep"):
        if required not in raw:
            raise ValueError(f"config is missing required field {required!r}")
    sweep_raw = dict(raw["sweep"])
    sweep = Sweep(
        kind=sweep_raw.pop("kind"),
        values=tuple(sweep_raw.pop("values")),
        two_cluster=bool(sweep_raw.pop("two_cluster", False)),
    )
    if sweep_raw:
        raise ValueError(f"unknown sweep fields: {sorted(sweep_raw)}")
    signals = tuple(parse_structure(s) for s in raw["signals"])
    kwargs = {key: raw[key] for key in ("n", "d", "k", "m", "trials", "master_seed", "nomp_window", "epsilon") if key in raw}
    return ExperimentConfig(
        name=raw.get("name", "custom"),
        algorithms=tuple(raw["algorithms"]),
        signals=signals,
        sweep=sweep,
        **kwargs,
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigspace",
        description="Sparse-recovery benchmarks over redundant dictionaries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list-presets", help="list the available experiment presets")
    run = sub.add_parser("run", help="run one experiment and emit CSV (and optionally SVG)")
    source = run.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", help="preset name (see list-presets)")
    source.add_argument("--config", help="path to a JSON experiment config")
    run.add_argument("--trials", type=int, help="override the trial count")
    run.add_argument("--seed", type=int, help="override the master seed")
    run.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    run.add_argument("--out", help="CSV output path (default: stdout)")
    run.add_argument("--svg", help="also render an SVG plot to this path")
    return parser


def _cmd_run(args) -> int:
    if args.preset is not None:
        try:
            cfg = preset(args.preset)
        except KeyError as exc:
            print(exc.args[0], file=sys.stderr)
            return 1
    else:
        try:
            with open(args.config, "r", encoding="utf-8") as handle:
                raw = json.load(handle)
            cfg = config_from_dict(raw)
        except (OSError, json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
            print(f"bad config {args.config}: {exc}", file=sys.stderr)
            return 1
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    try:
        if overrides:
            cfg = replace(cfg, **overrides)
        table = run_experiment(cfg, parallelism=max(1, args.jobs))
    except ValueError as exc:
        print(f"invalid experiment: {exc}", file=sys.stderr)
        return 1

    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
                emit_csv(table, handle)
        else:
            emit_csv(table, sys.stdout)
        if args.svg:
            with open(args.svg, "w", encoding="utf-8", newline="\n") as handle:
                emit_svg(table, handle)
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "list-presets":
        for name in PRESET_NAMES:
            print(name)
        return 0
    return _cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
