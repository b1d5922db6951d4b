"""Deterministic input currents I1(t) and the delay line for mean-field feedback."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Union

from .errors import ConfigError, MissingBuffer, RangeError


@dataclass(frozen=True)
class Constant:
    A: float


@dataclass(frozen=True)
class Periodic:
    """``A cos(2 pi f t)``."""

    A: float
    f: float

    def __post_init__(self):
        if not self.f > 0:
            raise ConfigError("periodic drive needs f > 0")


@dataclass(frozen=True)
class Feedback:
    """``A * n(t - delta_T)`` where ``n`` is the firing fraction of the population."""

    A: float
    delta_T: float

    def __post_init__(self):
        if self.delta_T < 0:
            raise ConfigError("feedback delay must be non-negative")


@dataclass(frozen=True)
class Sum:
    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise ConfigError("Sum drive needs at least one term")
        object.__setattr__(self, "terms", tuple(self.terms))


DriveSpec = Union[Constant, Periodic, Feedback, Sum]


def feedback_terms(spec: DriveSpec) -> list[Feedback]:
    if isinstance(spec, Feedback):
        return [spec]
    if isinstance(spec, Sum):
        return [fb for term in spec.terms for fb in feedback_terms(term)]
    return []


def drive_frequency(spec: DriveSpec):
    """Frequency of the first periodic component, or ``None``."""
    if isinstance(spec, Periodic):
        return spec.f
    if isinstance(spec, Sum):
        for term in spec.terms:
            f = drive_frequency(term)
            if f is not None:
                return f
    return None


class DelayBuffer:
    """Ring of past firing fractions at ``dt`` spacing.

    ``read()`` returns the oldest sample in the ring, so a value pushed at
    step ``k`` is read at step ``k + capacity``.  Until the ring has been
    filled, reads return the prefill value ``n0``.  With zero capacity the
    latest push is returned.
    """

    def __init__(self, delta_T: float, dt: float, n0: float = 0.0):
        if dt <= 0 or delta_T < 0:
            raise ConfigError("need dt > 0 and delta_T >= 0")
        steps = delta_T / dt
        if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
            raise ConfigError(f"delay {delta_T} is not a whole number of steps of {dt}")
        self.delta_T = delta_T
        self.dt = dt
        self.capacity = int(round(steps))
        self.n0 = n0
        self._ring = deque([n0] * self.capacity, maxlen=self.capacity) if self.capacity else None
        self._latest = n0

    def read(self) -> float:
        if self.capacity == 0:
            return self._latest
        return self._ring[0]

    def push(self, n_now: float) -> "DelayBuffer":
        if not -1e-9 <= n_now <= 1 + 1e-9:
            raise RangeError(f"firing fraction {n_now} outside [0, 1]")
        n_now = min(max(n_now, 0.0), 1.0)
        if self.capacity:
            self._ring.append(n_now)
        self._latest = n_now
        return self

    push_and_rotate = push


def current(spec: DriveSpec, t: float, buffer: DelayBuffer | dict | None = None) -> float:
    """Evaluate I1 at time ``t``.

    ``buffer`` is a single :class:`DelayBuffer`, or a mapping from each
    :class:`Feedback` term to its own buffer when a sum carries several.
    """
    if isinstance(spec, Constant):
        return spec.A
    if isinstance(spec, Periodic):
        return spec.A * math.cos(2.0 * math.pi * spec.f * t)
    if isinstance(spec, Feedback):
        if isinstance(buffer, dict):
            buffer = buffer.get(spec)
        if buffer is None:
            raise MissingBuffer("feedback drive evaluated without a delay buffer")
        return spec.A * buffer.read()
    if isinstance(spec, Sum):
        return sum(current(term, t, buffer) for term in spec.terms)
    raise ConfigError(f"not a drive spec: {spec!r}")
