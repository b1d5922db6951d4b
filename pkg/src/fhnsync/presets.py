"""Shipped scenario presets.

``S1a``/``S1b`` noise only, ``S2`` periodic forcing over a noise sweep,
``S3`` delayed feedback, ``S4`` a delay sweep of S3, ``S5`` periodic
forcing plus feedback.  Variants carry a suffix after a colon.
"""
from __future__ import annotations

from dataclasses import replace

from .config import ScenarioConfig, Sweep
from .drive import Constant, Feedback, Periodic, Sum
from .errors import ConfigError
from .model import FhnParams

F_SIGNAL = 0.55
A_SIGNAL = 0.15
SR_NOISE = (0.001, 0.0025, 0.005, 0.01, 0.02)
# 3/4 of the drive period rounded to the 0.01 step
S5_DELAY = 1.36
# 0.2 up to a fifth of the S3 cycle (about 4.6 time units)
S4_DELAYS = (0.2, 0.35, 0.5, 0.65, 0.8, 0.92)


def _noise_only(D):
    return ScenarioConfig(
        params=FhnParams(D=D), drive=Constant(0.0), t_end=100.0, snapshot_times=(0.0, 100.0),
    )


def _s2():
    return ScenarioConfig(
        params=FhnParams(D=0.005), drive=Periodic(A_SIGNAL, F_SIGNAL), t_end=300.0,
        sweep=Sweep("D", SR_NOISE), snapshot_times=(100.0, 120.0, 140.0),
    )


def _s3():
    return ScenarioConfig(params=FhnParams(D=0.005), drive=Feedback(0.9, 0.2), t_end=150.0)


def _s4():
    return replace(_s3(), sweep=Sweep("delay", S4_DELAYS))


def _s5(delay=S5_DELAY, gain=0.5, amplitude=A_SIGNAL):
    return ScenarioConfig(
        params=FhnParams(D=0.005),
        drive=Sum((Periodic(amplitude, F_SIGNAL), Feedback(gain, delay))),
        t_end=150.0,
    )


PRESETS = {
    "S1a": lambda: _noise_only(0.001),
    "S1b": lambda: _noise_only(0.005),
    "S2": _s2,
    "S3": _s3,
    "S4": _s4,
    "S5": _s5,
}

VARIANTS = {
    "S2:caption": lambda: replace(_s2(), drive=Periodic(0.17, F_SIGNAL)),
    "S3:noise": lambda: replace(_s3(), sweep=Sweep("D", (0.001, 0.005, 0.02))),
    "S3:weak": lambda: replace(_s3(), drive=Feedback(0.5, 0.2), sweep=Sweep("D", (0.001, 0.005, 0.02))),
    "S5:3.00": lambda: _s5(delay=3.0),
    "S5:nofeedback": lambda: _s5(gain=0.0),
    # periodic amplitude equal to the feedback gain, delay as printed in the figure caption
    "S5:caption": lambda: _s5(delay=3.0, amplitude=0.5),
    "S5:caption:nofeedback": lambda: _s5(delay=3.0, amplitude=0.5, gain=0.0),
}


def preset(name: str) -> ScenarioConfig:
    """Fresh config for a preset or variant name (case-insensitive)."""
    table = {**PRESETS, **VARIANTS}
    for key, make in table.items():
        if key.lower() == name.lower():
            return make()
    raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(table)}")


def names() -> list[str]:
    return list(PRESETS) + list(VARIANTS)
