import math

import pytest
from hypothesis import given, settings, strategies as st

from fhnsync.config import SWEEP_PARAMETERS, tomllib, ScenarioConfig, Sweep, config_from_dict, dumps_config, load_config, save_config
from fhnsync.drive import Constant, Feedback, Periodic, Sum
from fhnsync.errors import ConfigError, IoError
from fhnsync.fokker_planck import GridSpec
from fhnsync.model import FhnParams
from fhnsync.presets import PRESETS, names, preset
from fhnsync.sde import GaussianInit

TOML = """
method = "fp"
t_end = 20.0
seed = 4
snapshot_times = [0.0, 10.0]

[params]
D = 0.005

[grid]
du = 0.06
dv = 0.026

[[drive]]
type = "periodic"
A = 0.15
f = 0.55

[[drive]]
type = "feedback"
A = 0.5
delta_T = 1.36

[sweep]
parameter = "D"
values = [0.01, 0.001]
"""


def test_load(tmp_path):
    path = tmp_path / "s.toml"
    path.write_text(TOML)
    cfg = load_config(path)
    assert cfg.method == "fokker_planck"
    assert cfg.params == FhnParams(D=0.005)
    assert cfg.grid == GridSpec(du=0.06, dv=0.026)
    assert cfg.drive == Sum((Periodic(0.15, 0.55), Feedback(0.5, 1.36)))
    assert cfg.snapshot_times == (0.0, 10.0)
    assert cfg.n_steps == 2000
    assert [v for v, _ in cfg.runs()] == [0.001, 0.01]
    assert cfg.runs()[0][1].params.D == 0.001


def test_round_trip_presets(tmp_path):
    for name in names():
        cfg = preset(name)
        path = save_config(cfg, tmp_path / f"{name.replace(':', '_')}.toml")
        assert load_config(path) == cfg


@pytest.mark.parametrize("doc, fragment", [
    ({"metod": "fp"}, "unknown keys"),
    ({"method": "exact"}, "unknown method"),
    ({"params": {"D": -1.0}}, "D >= 0"),
    ({"params": {"e": 1.0}}, "unknown keys"),
    ({"drive": {"type": "square", "A": 1.0}}, "unknown drive"),
    ({"drive": {"type": "periodic", "A": 1.0}}, "missing"),
    ({"drive": []}, "empty drive"),
    ({"sweep": {"parameter": "du", "values": [1.0]}}, "cannot sweep"),
    ({"sweep": {"parameter": "D", "values": []}}, "at least one"),
    ({"sweep": {"values": [1.0]}}, "needs"),
    ({"snapshot_times": [-1.0]}, "snapshot"),
    ({"t_end": "long"}, "number"),
    ({"scheme": "central"}, "scheme"),
    ({"dt": 0.0}, "dt"),
])
def test_config_errors(doc, fragment):
    with pytest.raises(ConfigError, match=fragment):
        config_from_dict(doc)


def test_bad_toml(tmp_path):
    path = tmp_path / "x.toml"
    path.write_text("method = ")
    with pytest.raises(ConfigError):
        load_config(path)
    with pytest.raises(IoError):
        load_config(tmp_path / "missing.toml")


def test_sweep_targets_missing_term():
    with pytest.raises(ConfigError):
        ScenarioConfig(sweep=Sweep("delay", (0.2,))).runs()


def test_with_value_in_sum():
    cfg = ScenarioConfig(drive=Sum((Periodic(0.15, 0.55), Feedback(0.5, 1.36))))
    assert cfg.with_value("feedback_gain", 0.0).drive == Sum((Periodic(0.15, 0.55), Feedback(0.0, 1.36)))
    assert cfg.with_value("periodic_frequency", 0.3).drive.terms[0] == Periodic(0.15, 0.3)
    assert cfg.with_value("seed", 9.0).seed == 9


# -- presets --------------------------------------------------------------------

def test_preset_set():
    assert list(PRESETS) == ["S1a", "S1b", "S2", "S3", "S4", "S5"]
    with pytest.raises(ConfigError):
        preset("S9")
    assert preset("s3") == preset("S3")


def test_golden_presets():
    base = FhnParams()
    assert (base.a, base.b, base.c) == (0.7, 0.8, 10.0)
    grid = GridSpec()
    assert (grid.u_min, grid.u_max, grid.v_min, grid.v_max, grid.du, grid.dv) == (-4.5, 4.5, -2.34, 2.34, 0.03, 0.013)
    assert GaussianInit() == GaussianInit(-1.0, -0.55, 0.05, 0.013)
    for name in PRESETS:
        cfg = preset(name)
        assert cfg.dt == 0.01 and cfg.grid == grid and cfg.initial == GaussianInit()
        assert (cfg.params.a, cfg.params.b, cfg.params.c) == (0.7, 0.8, 10.0)

    s1a, s1b = preset("S1a"), preset("S1b")
    assert s1a.params.D == 0.001 and s1b.params.D == 0.005
    assert s1a.drive == Constant(0.0) == s1b.drive
    assert s1a.t_end == 100.0

    s2 = preset("S2")
    assert s2.drive == Periodic(0.15, 0.55)
    assert s2.sweep == Sweep("D", (0.001, 0.0025, 0.005, 0.01, 0.02))
    assert s2.t_end == 300.0

    s3 = preset("S3")
    assert s3.drive == Feedback(0.9, 0.2) and s3.params.D == 0.005 and s3.t_end == 150.0

    s4 = preset("S4")
    assert s4.drive == Feedback(0.9, 0.2) and s4.params.D == 0.005
    assert s4.sweep.parameter == "delay" and s4.sweep.values[0] == 0.2
    assert list(s4.sweep.values) == sorted(s4.sweep.values)

    s5 = preset("S5")
    assert s5.params.D == 0.005
    assert s5.drive == Sum((Periodic(0.15, 0.55), Feedback(0.5, 1.36)))
    assert preset("S5:3.00").drive.terms[1] == Feedback(0.5, 3.0)
    assert preset("S5:nofeedback").drive.terms[1].A == 0.0
    assert preset("S2:caption").drive == Periodic(0.17, 0.55)
    assert preset("S5:caption").drive == Sum((Periodic(0.5, 0.55), Feedback(0.5, 3.0)))
    assert preset("S5:caption:nofeedback").drive.terms[1].A == 0.0


finite = st.floats(allow_nan=False, allow_infinity=False)


@settings(max_examples=60)
@given(
    D=st.floats(0, 1), A=st.floats(-2, 2), f=st.floats(0.01, 5), delay=st.integers(0, 500),
    t_end=st.floats(1.0, 1000.0), seed=st.integers(0, 2**63), method=st.sampled_from(["fp", "mc", "both"]),
    snaps=st.lists(st.floats(0, 1), max_size=4),
    sweep=st.one_of(st.none(), st.tuples(st.sampled_from(SWEEP_PARAMETERS), st.lists(finite, min_size=1, max_size=4))),
)
def test_dump_load_round_trip(D, A, f, delay, t_end, seed, method, snaps, sweep):
    cfg = ScenarioConfig(
        method=method, params=FhnParams(D=D), drive=Sum((Periodic(A, f), Feedback(A, delay * 0.01))),
        t_end=t_end, seed=seed, snapshot_times=tuple(t_end * x for x in snaps),
        sweep=Sweep(sweep[0], tuple(sweep[1])) if sweep else None,
    )
    assert config_from_dict(tomllib.loads(dumps_config(cfg))) == cfg
