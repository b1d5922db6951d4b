"""Scenario description, its TOML file format and the shipped presets.

A scenario file is TOML with flat top-level keys and a few tables::

    method = "fokker_planck"        # or "monte_carlo", "both"
    t_end = 150.0
    dt = 0.01
    seed = 0
    snapshot_times = [0.0, 100.0]

    [params]                        # any of a, b, c, D
    D = 0.005

    [grid]                          # u_min, u_max, v_min, v_max, du, dv
    du = 0.03

    [initial]                       # Gaussian start, mean_u, mean_v, var_u, var_v
    mean_u = -1.0

    [[drive]]                       # several entries are summed
    type = "feedback"               # constant {A}, periodic {A, f}, feedback {A, delta_T}
    A = 0.9
    delta_T = 0.2

    [sweep]
    parameter = "D"                 # see SWEEP_PARAMETERS
    values = [0.001, 0.005, 0.02]

Optional top-level keys: ``n_trajectories``, ``scheme`` ("characteristic",
"fitted" or "upwind"), ``v_transport`` ("remap" or "implicit"), ``u_substeps``,
``spectral_t0``, ``output_dir``, ``workers``.
"""
from __future__ import annotations

import dataclasses
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .drive import Constant, DriveSpec, Feedback, Periodic, Sum
from .errors import ConfigError, IoError
from .fokker_planck import SCHEMES, GridSpec
from .model import FhnParams
from .sde import GaussianInit

METHODS = ("fokker_planck", "monte_carlo", "both")
_METHOD_ALIASES = {"fp": "fokker_planck", "mc": "monte_carlo"}

SWEEP_PARAMETERS = (
    "D", "a", "b", "c",
    "feedback_gain", "delay", "periodic_amplitude", "periodic_frequency", "constant",
    "t_end", "seed",
)


@dataclass(frozen=True)
class Sweep:
    parameter: str
    values: tuple

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"cannot sweep {self.parameter!r}; choose from {', '.join(SWEEP_PARAMETERS)}")
        if not self.values:
            raise ConfigError("sweep needs at least one value")
        object.__setattr__(self, "values", tuple(float(x) for x in self.values))


@dataclass(frozen=True)
class ScenarioConfig:
    method: str = "fokker_planck"
    params: FhnParams = field(default_factory=FhnParams)
    grid: GridSpec = field(default_factory=GridSpec)
    drive: DriveSpec = field(default_factory=lambda: Constant(0.0))
    t_end: float = 150.0
    dt: float = 0.01
    snapshot_times: tuple = ()
    sweep: Optional[Sweep] = None
    seed: int = 0
    output_dir: Optional[str] = None
    initial: GaussianInit = field(default_factory=GaussianInit)
    n_trajectories: int = 10_000
    scheme: str = "characteristic"
    v_transport: str = "remap"
    u_substeps: int = 1
    #: start of the window used for SNR estimates
    spectral_t0: float = 50.0
    workers: int = 1

    def __post_init__(self):
        method = _METHOD_ALIASES.get(self.method, self.method)
        if method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        object.__setattr__(self, "method", method)
        if not (self.dt > 0 and self.t_end > self.dt):
            raise ConfigError("need dt > 0 and t_end > dt")
        times = tuple(float(t) for t in self.snapshot_times)
        if any(not 0 <= t <= self.t_end + 1e-9 for t in times):
            raise ConfigError("snapshot times must lie in [0, t_end]")
        object.__setattr__(self, "snapshot_times", times)
        if self.n_trajectories < 1:
            raise ConfigError("n_trajectories must be positive")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if self.v_transport not in ("remap", "implicit"):
            raise ConfigError(f"unknown v_transport {self.v_transport!r}")
        if self.u_substeps < 1:
            raise ConfigError("u_substeps must be at least 1")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")

    @property
    def n_steps(self) -> int:
        return int(math.floor(self.t_end / self.dt + 1e-9))

    def with_value(self, parameter: str, value: float) -> "ScenarioConfig":
        """Copy with one sweepable parameter set (and the sweep removed)."""
        cfg = replace(self, sweep=None)
        if parameter in ("D", "a", "b", "c"):
            return replace(cfg, params=replace(cfg.params, **{parameter: value}))
        if parameter == "t_end":
            return replace(cfg, t_end=value)
        if parameter == "seed":
            return replace(cfg, seed=int(value))
        key = {
            "feedback_gain": (Feedback, "A"), "delay": (Feedback, "delta_T"),
            "periodic_amplitude": (Periodic, "A"), "periodic_frequency": (Periodic, "f"),
            "constant": (Constant, "A"),
        }[parameter]
        new_drive, hits = _set_in_drive(cfg.drive, key[0], key[1], value)
        if not hits:
            raise ConfigError(f"drive has no {key[0].__name__.lower()} term to set {parameter}")
        return replace(cfg, drive=new_drive)

    def runs(self) -> list[tuple[Optional[float], "ScenarioConfig"]]:
        if self.sweep is None:
            return [(None, self)]
        return [(v, self.with_value(self.sweep.parameter, v)) for v in sorted(self.sweep.values)]


def _set_in_drive(spec, kind, attr, value):
    if isinstance(spec, Sum):
        parts = [_set_in_drive(t, kind, attr, value) for t in spec.terms]
        return Sum(tuple(p[0] for p in parts)), sum(p[1] for p in parts)
    if isinstance(spec, kind):
        return replace(spec, **{attr: value}), 1
    return spec, 0


# -- parsing -------------------------------------------------------------------

_DRIVE_TYPES = {"constant": (Constant, ("A",)), "periodic": (Periodic, ("A", "f")), "feedback": (Feedback, ("A", "delta_T"))}


def _drive_from_table(entry: dict) -> DriveSpec:
    entry = dict(entry)
    kind = entry.pop("type", None)
    if kind == "sum":
        return Sum(tuple(_drive_from_table(t) for t in entry.pop("terms", [])))
    if kind not in _DRIVE_TYPES:
        raise ConfigError(f"unknown drive type {kind!r}")
    cls, names = _DRIVE_TYPES[kind]
    missing = [n for n in names if n not in entry]
    extra = set(entry) - set(names)
    if missing or extra:
        raise ConfigError(f"{kind} drive: missing {missing}, unexpected {sorted(extra)}")
    return cls(**{n: float(entry[n]) for n in names})


def _sub(cls, table, name):
    if not isinstance(table, dict):
        raise ConfigError(f"[{name}] must be a table")
    known = {f.name for f in dataclasses.fields(cls)}
    extra = set(table) - known
    if extra:
        raise ConfigError(f"[{name}] has unknown keys {sorted(extra)}")
    try:
        return cls(**{k: float(v) for k, v in table.items()})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{name}]: {exc}") from exc


def config_from_dict(doc: dict) -> ScenarioConfig:
    doc = dict(doc)
    kw = {}
    if "params" in doc:
        kw["params"] = _sub(FhnParams, doc.pop("params"), "params")
    if "grid" in doc:
        kw["grid"] = _sub(GridSpec, doc.pop("grid"), "grid")
    if "initial" in doc:
        kw["initial"] = _sub(GaussianInit, doc.pop("initial"), "initial")
    if "drive" in doc:
        entries = doc.pop("drive")
        if isinstance(entries, dict):
            entries = [entries]
        terms = [_drive_from_table(e) for e in entries]
        if not terms:
            raise ConfigError("empty drive list")
        kw["drive"] = terms[0] if len(terms) == 1 else Sum(tuple(terms))
    if "sweep" in doc:
        sw = doc.pop("sweep")
        try:
            kw["sweep"] = Sweep(sw["parameter"], tuple(sw["values"]))
        except KeyError as exc:
            raise ConfigError(f"[sweep] needs {exc}") from exc
    scalars = {
        "method": str, "t_end": float, "dt": float, "seed": int, "output_dir": str,
        "n_trajectories": int, "scheme": str, "v_transport": str, "u_substeps": int,
        "spectral_t0": float, "workers": int,
    }
    for key, typ in scalars.items():
        if key in doc:
            value = doc.pop(key)
            if typ is not str and isinstance(value, (str, bool)):
                raise ConfigError(f"{key} must be a number")
            kw[key] = typ(value)
    if "snapshot_times" in doc:
        try:
            kw["snapshot_times"] = tuple(float(t) for t in doc.pop("snapshot_times"))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"snapshot_times: {exc}") from exc
    if doc:
        raise ConfigError(f"unknown keys {sorted(doc)}")
    return ScenarioConfig(**kw)


def load_config(path) -> ScenarioConfig:
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return config_from_dict(doc)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, str):
        return '"' + x.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(i) for i in x) + "]"
    raise TypeError(type(x))


def _drive_tables(spec) -> list[dict]:
    if isinstance(spec, Sum):
        return [t for term in spec.terms for t in _drive_tables(term)]
    kind = {Constant: "constant", Periodic: "periodic", Feedback: "feedback"}[type(spec)]
    return [{"type": kind, **dataclasses.asdict(spec)}]


def dumps_config(cfg: ScenarioConfig) -> str:
    """Serialize to the TOML dialect read by :func:`load_config`."""
    lines = [
        f"method = {_fmt(cfg.method)}",
        f"t_end = {_fmt(float(cfg.t_end))}",
        f"dt = {_fmt(float(cfg.dt))}",
        f"seed = {_fmt(int(cfg.seed))}",
        f"n_trajectories = {_fmt(int(cfg.n_trajectories))}",
        f"scheme = {_fmt(cfg.scheme)}",
        f"v_transport = {_fmt(cfg.v_transport)}",
        f"u_substeps = {_fmt(int(cfg.u_substeps))}",
        f"spectral_t0 = {_fmt(float(cfg.spectral_t0))}",
        f"workers = {_fmt(int(cfg.workers))}",
        f"snapshot_times = {_fmt(list(cfg.snapshot_times))}",
    ]
    if cfg.output_dir is not None:
        lines.append(f"output_dir = {_fmt(str(cfg.output_dir))}")
    for name, obj in (("params", cfg.params), ("grid", cfg.grid), ("initial", cfg.initial)):
        lines += ["", f"[{name}]"] + [f"{k} = {_fmt(float(v))}" for k, v in dataclasses.asdict(obj).items()]
    for table in _drive_tables(cfg.drive):
        lines += ["", "[[drive]]"] + [f"{k} = {_fmt(v if k == 'type' else float(v))}" for k, v in table.items()]
    if cfg.sweep is not None:
        lines += ["", "[sweep]", f"parameter = {_fmt(cfg.sweep.parameter)}", f"values = {_fmt(list(cfg.sweep.values))}"]
    return "\n".join(lines) + "\n"


def save_config(cfg: ScenarioConfig, path) -> Path:
    path = Path(path)
    path.write_text(dumps_config(cfg), newline="\n")
    return path
