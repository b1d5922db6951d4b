"""Scenario engine: couples drives to the density solver and/or the ensemble,
assembles reports and writes them to disk."""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .config import ScenarioConfig, save_config
from .drive import drive_frequency, feedback_terms
from .errors import FhnError, IoError
from .fokker_planck import (
    DensityField, FpStepConfig, fp_step, init_gaussian, moments, supra_fraction,
    total_mass, write_snapshot,
)
from .sde import Ensemble, EnsembleConfig, FeedbackLoop, histogram2d
from .spectral import SnrResult, TimeSeries, dominant_frequency, snr

#: peak-to-peak swing of n(t) below which the population counts as quiescent;
#: the split density step leaves a period-2 ripple of order 1e-6
QUIESCENT_PTP = 1e-4


@dataclass
class RunResult:
    """Time series and summary numbers of one method in one run."""

    method: str
    t: np.ndarray
    mean_u: np.ndarray
    mean_v: np.ndarray
    n: np.ndarray
    I1: np.ndarray
    total_mass: np.ndarray
    leaked_mass: float
    snapshots: dict = field(default_factory=dict)
    final_density: Optional[DensityField] = None
    final_histogram: Optional[np.ndarray] = None
    n_max: float = math.nan
    dominant_frequency: float = math.nan
    snr: Optional[SnrResult] = None

    def summarize(self, cfg: ScenarioConfig) -> "RunResult":
        late = self.t >= cfg.t_end / 2 - 1e-9
        self.n_max = float(np.max(self.n[late]))
        self.dominant_frequency = 0.0
        if np.ptp(self.n[late]) >= QUIESCENT_PTP:
            try:
                self.dominant_frequency = dominant_frequency(TimeSeries(self.n[late], cfg.dt))
            except FhnError:
                pass
        f = drive_frequency(cfg.drive)
        if f is not None:
            try:
                self.snr = snr(TimeSeries(self.mean_u, cfg.dt).after(cfg.spectral_t0), f)
            except FhnError:
                self.snr = None
        return self


@dataclass
class ScenarioReport:
    config: ScenarioConfig
    runs: dict

    @property
    def primary(self) -> RunResult:
        return self.runs.get("fokker_planck") or self.runs["monte_carlo"]


@dataclass
class SweepReport:
    config: ScenarioConfig
    parameter: str
    rows: list  # (value, ScenarioReport), ordered by value

    def table(self, method: Optional[str] = None) -> list[dict]:
        out = []
        for value, rep in self.rows:
            run = rep.runs[method] if method else rep.primary
            out.append({
                self.parameter: value,
                "n_max": run.n_max,
                "dominant_frequency": run.dominant_frequency,
                "snr_db": run.snr.snr_db if run.snr else math.nan,
                "leaked_mass": run.leaked_mass,
            })
        return out


def _snapshot_steps(cfg: ScenarioConfig) -> dict:
    return {int(round(t / cfg.dt)): t for t in cfg.snapshot_times}


def run_fokker_planck(cfg: ScenarioConfig, keep_final: bool = True) -> RunResult:
    n_steps = cfg.n_steps
    field_ = init_gaussian(cfg.grid, **_ic(cfg))
    step_cfg = FpStepConfig(cfg.params, cfg.dt, cfg.scheme, cfg.v_transport, cfg.u_substeps)
    series = np.empty((5, n_steps + 1))  # mean_u, mean_v, n, I1, mass
    I1 = series[3]

    def record(k):
        mu, mv, _, _ = moments(field_)
        series[0, k], series[1, k] = mu, mv
        series[2, k] = supra_fraction(field_)
        series[4, k] = total_mass(field_)

    record(0)
    wanted = _snapshot_steps(cfg)
    snaps = {}
    if 0 in wanted:
        snaps[wanted[0]] = field_.copy()
    loop = FeedbackLoop(cfg.drive, cfg.dt, series[2, 0])
    for k in range(n_steps):
        I1[k] = loop.input(k * cfg.dt, series[2, k])
        fp_step(field_, step_cfg, I1[k], inplace=True)
        loop.after_step(series[2, k])
        record(k + 1)
        if k + 1 in wanted:
            snaps[wanted[k + 1]] = field_.copy()
    I1[n_steps] = loop.input(n_steps * cfg.dt, series[2, n_steps])
    return RunResult(
        "fokker_planck", cfg.dt * np.arange(n_steps + 1), series[0], series[1], series[2], I1,
        series[4], field_.leaked_mass, snaps, field_ if keep_final else None,
    ).summarize(cfg)


def run_monte_carlo(cfg: ScenarioConfig) -> RunResult:
    n_steps = cfg.n_steps
    ens = Ensemble(EnsembleConfig(
        cfg.params, cfg.drive, cfg.n_trajectories, cfg.dt, cfg.t_end, cfg.initial,
        cfg.seed, cfg.grid, cfg.workers,
    ))
    series = np.empty((5, n_steps + 1))
    mu, mv, n0, alive0 = ens.observe()
    series[:, 0] = (mu, mv, n0, math.nan, alive0 / cfg.n_trajectories)
    loop = FeedbackLoop(cfg.drive, cfg.dt, n0)
    has_feedback = bool(feedback_terms(cfg.drive))
    k = 0
    while k < n_steps:
        # without feedback the input is known ahead, so integrate in chunks
        k1 = k + 1 if has_feedback else min(k + 1000, n_steps)
        for j in range(k, k1):
            series[3, j] = loop.input(j * cfg.dt, series[2, k])
        stats = ens.advance(series[3, k:k1])
        cnt = stats[:, 2]
        safe = np.maximum(cnt, 1)
        series[0, k + 1 : k1 + 1] = np.where(cnt > 0, stats[:, 0] / safe, np.nan)
        series[1, k + 1 : k1 + 1] = np.where(cnt > 0, stats[:, 1] / safe, np.nan)
        series[2, k + 1 : k1 + 1] = stats[:, 3] / safe
        series[4, k + 1 : k1 + 1] = cnt / cfg.n_trajectories
        loop.after_step(series[2, k])
        k = k1
    series[3, n_steps] = loop.input(n_steps * cfg.dt, series[2, n_steps])
    hist, _ = histogram2d(*ens.states(), cfg.grid)
    return RunResult(
        "monte_carlo", cfg.dt * np.arange(n_steps + 1), series[0], series[1], series[2], series[3],
        series[4], 1.0 - series[4, -1], final_histogram=hist,
    ).summarize(cfg)


def _ic(cfg: ScenarioConfig) -> dict:
    i = cfg.initial
    return dict(mean_u=i.mean_u, mean_v=i.mean_v, var_u=i.var_u, var_v=i.var_v)


def run_scenario(cfg: ScenarioConfig) -> ScenarioReport:
    """Run one scenario (the sweep, if any, is ignored)."""
    runs = {}
    if cfg.method in ("fokker_planck", "both"):
        runs["fokker_planck"] = run_fokker_planck(cfg)
    if cfg.method in ("monte_carlo", "both"):
        runs["monte_carlo"] = run_monte_carlo(cfg)
    return ScenarioReport(cfg, runs)


def run_sweep(cfg: ScenarioConfig, workers: Optional[int] = None) -> SweepReport:
    """One independent run per swept value, ordered by value.

    ``workers > 1`` distributes the runs over processes; results are the
    same as serial execution.
    """
    if cfg.sweep is None:
        return SweepReport(cfg, "", [(None, run_scenario(cfg))])
    members = cfg.runs()
    workers = cfg.workers if workers is None else workers
    if workers > 1 and len(members) > 1:
        with ProcessPoolExecutor(min(workers, len(members))) as pool:
            reports = list(pool.map(run_scenario, [m for _, m in members]))
    else:
        reports = [run_scenario(m) for _, m in members]
    return SweepReport(cfg, cfg.sweep.parameter, [(v, r) for (v, _), r in zip(members, reports)])


# -- output --------------------------------------------------------------------

def _g(x) -> str:
    return f"{x:.9g}"


def _write_run(run: RunResult, cfg: ScenarioConfig, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    with (out / "timeseries.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "mean_u", "mean_v", "n", "I1", "total_mass"])
        for row in zip(run.t, run.mean_u, run.mean_v, run.n, run.I1, run.total_mass):
            w.writerow([_g(x) for x in row])
    for t, snap in sorted(run.snapshots.items()):
        write_snapshot(snap, out / f"density_t{t:09.3f}.txt")
    summary = {
        "method": run.method,
        "n_max": _g(run.n_max),
        "dominant_frequency": _g(run.dominant_frequency),
        "snr_db": _g(run.snr.snr_db) if run.snr else "nan",
        "leaked_mass": _g(run.leaked_mass),
        "final_total_mass": _g(run.total_mass[-1]),
    }
    (out / "report.txt").write_text("".join(f"{k} = {v}\n" for k, v in summary.items()), newline="\n")


def emit_outputs(report, cfg: ScenarioConfig, output_dir=None) -> Path:
    """Write CSV time series, density snapshots, report and sweep tables."""
    out = Path(output_dir or cfg.output_dir or ".")
    try:
        out.mkdir(parents=True, exist_ok=True)
        save_config(cfg, out / "scenario.toml")
        if isinstance(report, SweepReport):
            if report.parameter:
                methods = list(report.rows[0][1].runs)
                for method in methods:
                    name = "sweep.csv" if len(methods) == 1 else f"sweep_{_short(method)}.csv"
                    rows = report.table(method)
                    with (out / name).open("w", newline="") as fh:
                        w = csv.writer(fh, lineterminator="\n")
                        w.writerow(list(rows[0]))
                        for r in rows:
                            w.writerow([_g(x) for x in r.values()])
                for value, rep in report.rows:
                    emit_outputs(rep, rep.config, out / f"{report.parameter}={value:.9g}")
            else:
                emit_outputs(report.rows[0][1], cfg, out)
            return out
        if len(report.runs) == 1:
            _write_run(report.primary, cfg, out)
        else:
            for method, run in report.runs.items():
                _write_run(run, cfg, out / _short(method))
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return out


def _short(method: str) -> str:
    return {"fokker_planck": "fp", "monte_carlo": "mc"}[method]


__all__ = [
    "RunResult", "ScenarioReport", "SweepReport", "run_fokker_planck", "run_monte_carlo",
    "run_scenario", "run_sweep", "emit_outputs", "IoError",
]
