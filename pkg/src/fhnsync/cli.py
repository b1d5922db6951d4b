"""Command line entry point.

    fhnsync run <config.toml>
    fhnsync sweep <config.toml>
    fhnsync preset <name>

Common flags: --out DIR, --seed N, --snapshot-every DT, --method fp|mc|both.
On failure a single line ``error: <category>: <message>`` goes to stderr and
the exit status is non-zero.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from .config import ScenarioConfig, load_config
from .errors import ConfigError, FhnError
from .presets import names, preset
from .scenarios import SweepReport, emit_outputs, run_scenario, run_sweep

EXIT_CODES = {
    "config": 2, "io": 3, "stability": 4, "no-convergence": 5, "grid": 6,
    "empty-density": 7, "missing-buffer": 8, "range": 9, "too-short": 10, "out-of-band": 11,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message.replace("\n", " "))


def _parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int, help="master seed for Monte Carlo streams")
    common.add_argument("--snapshot-every", type=float, metavar="DT", help="write a density snapshot every DT")
    common.add_argument("--method", choices=("fp", "mc", "both"))
    common.add_argument("--workers", type=int, help="parallel workers for sweeps and ensembles")

    p = _Parser(prog="fhnsync", description="Noise-driven synchronization of FitzHugh-Nagumo ensembles.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("run", parents=[common], help="run one scenario").add_argument("config")
    sub.add_parser("sweep", parents=[common], help="run the sweep of a scenario").add_argument("config")
    sub.add_parser("preset", parents=[common], help=f"run a preset ({', '.join(names())})").add_argument("name")
    return p


def _apply_flags(cfg: ScenarioConfig, args) -> ScenarioConfig:
    changes = {}
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("seed must be non-negative")
        changes["seed"] = args.seed
    if args.method is not None:
        changes["method"] = args.method
    if args.workers is not None:
        changes["workers"] = args.workers
    if args.out is not None:
        changes["output_dir"] = args.out
    if args.snapshot_every is not None:
        step = args.snapshot_every
        if not (math.isfinite(step) and step > 0):
            raise ConfigError("--snapshot-every must be positive")
        count = int(math.floor(cfg.t_end / step + 1e-9))
        changes["snapshot_times"] = tuple(float(x) for x in np.round(step * np.arange(count + 1), 12))
    return replace(cfg, **changes) if changes else cfg


def _summary(report) -> list[str]:
    if isinstance(report, SweepReport):
        lines = []
        for row in report.table():
            lines.append(" ".join(f"{k}={v:.6g}" for k, v in row.items()))
        return lines
    out = []
    for method, run in report.runs.items():
        snr_db = run.snr.snr_db if run.snr else math.nan
        out.append(
            f"{method} n_max={run.n_max:.6g} dominant_frequency={run.dominant_frequency:.6g} "
            f"snr_db={snr_db:.6g} leaked_mass={run.leaked_mass:.3g}"
        )
    return out


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
        if args.command == "preset":
            cfg = preset(args.name)
        else:
            cfg = load_config(args.config)
        cfg = _apply_flags(cfg, args)
        if args.command == "run":
            report = run_scenario(cfg)
        elif args.command == "sweep":
            if cfg.sweep is None:
                raise ConfigError(f"{args.config} has no [sweep] table")
            report = run_sweep(cfg)
        else:
            report = run_sweep(cfg) if cfg.sweep is not None else run_scenario(cfg)
        out = emit_outputs(report, cfg, cfg.output_dir or ".")
    except FhnError as exc:
        print(f"error: {exc.category}: {str(exc).splitlines()[0] if str(exc) else type(exc).__name__}", file=sys.stderr)
        return EXIT_CODES.get(exc.category, 1)
    except KeyboardInterrupt:
        print("error: interrupted: keyboard interrupt", file=sys.stderr)
        return 130
    for line in _summary(report):
        print(line)
    print(f"output: {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
