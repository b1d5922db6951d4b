"""Euler-Maruyama Monte Carlo for the noisy FitzHugh-Nagumo neuron.

Trajectories are advanced in fixed blocks of ``BLOCK`` members.  Each block
accumulates its per-step sums in trajectory order and the blocks are reduced
in block order, so the ensemble statistics do not depend on how many workers
processed the blocks.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Union

import numba
import numpy as np

from .drive import Constant, DelayBuffer, DriveSpec, current, feedback_terms
from .errors import ConfigError
from .fokker_planck import GridSpec
from .model import FhnParams, NeuronState
from .rng import normal_pair

BLOCK = 512
# counter offset reserved for initial-condition draws
_INIT_COUNTER = 1 << 63


@dataclass(frozen=True)
class GaussianInit:
    mean_u: float = -1.0
    mean_v: float = -0.55
    var_u: float = 0.05
    var_v: float = 0.013


@dataclass(frozen=True)
class EnsembleConfig:
    params: FhnParams = field(default_factory=FhnParams)
    drive: DriveSpec = field(default_factory=lambda: Constant(0.0))
    n_trajectories: int = 10_000
    dt: float = 0.01
    t_end: float = 150.0
    initial: Union[NeuronState, GaussianInit] = field(default_factory=GaussianInit)
    master_seed: int = 0
    #: absorbing box and histogram grid
    grid: GridSpec = field(default_factory=GridSpec)
    workers: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigError("dt must be positive")
        if not self.t_end > self.dt:
            raise ConfigError("t_end must exceed dt")
        if self.n_trajectories < 1:
            raise ConfigError("ensemble is empty")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must fit in 64 unsigned bits")

    @property
    def n_steps(self) -> int:
        return int(math.floor(self.t_end / self.dt + 1e-9))


@dataclass
class EnsembleRun:
    t: np.ndarray
    mean_u: np.ndarray
    mean_v: np.ndarray
    #: fraction of surviving trajectories with u > 0
    n: np.ndarray
    I1: np.ndarray
    surviving: np.ndarray
    final_histogram: np.ndarray
    outside_histogram: int
    absorbed: int
    config: EnsembleConfig


def em_step(params: FhnParams, state, I1: float, dt: float, z: float) -> NeuronState:
    """One Euler-Maruyama step; noise enters the u-equation only, scaled by ``c``."""
    u, v = state
    c = params.c
    u_new = u + dt * c * (-v + u - u**3 / 3.0 + I1) + c * math.sqrt(2.0 * params.D * dt) * z
    v_new = v + dt * (u - params.b * v + params.a)
    return NeuronState(u_new, v_new)


@numba.njit(cache=True, nogil=True)
def _init_block(u, v, alive, start, stop, seed, mu, mv, su, sv, fixed):
    for idx in range(start, stop):
        if fixed:
            u[idx] = mu
            v[idx] = mv
        else:
            zu, zv = normal_pair(seed, idx, _INIT_COUNTER)
            u[idx] = mu + su * zu
            v[idx] = mv + sv * zv
        alive[idx] = True


@numba.njit(cache=True, nogil=True)
def _advance_block(u, v, alive, start, stop, step0, I1, a, b, c, D, dt, seed, box, stats):
    """Advance trajectories ``start:stop`` by ``len(I1)`` steps.

    ``stats[s]`` receives (sum u, sum v, survivors, survivors with u > 0)
    after step ``s``.
    """
    n = I1.shape[0]
    amp = c * math.sqrt(2.0 * D * dt)
    u_lo, u_hi, v_lo, v_hi = box[0], box[1], box[2], box[3]
    for s in range(n):
        for q in range(4):
            stats[s, q] = 0.0
    for idx in range(start, stop):
        if not alive[idx]:
            continue
        x = u[idx]
        y = v[idx]
        live = True
        z1 = 0.0
        for s in range(n):
            k = step0 + s
            if live:
                if k % 2 == 0 or s == 0:
                    z0, z1 = normal_pair(seed, idx, k // 2)
                    z = z0 if k % 2 == 0 else z1
                else:
                    z = z1
                x_new = x + dt * c * (-y + x - x * x * x / 3.0 + I1[s]) + amp * z
                y = y + dt * (x - b * y + a)
                x = x_new
                if x < u_lo or x > u_hi or y < v_lo or y > v_hi:
                    live = False
            if live:
                stats[s, 0] += x
                stats[s, 1] += y
                stats[s, 2] += 1.0
                if x > 0.0:
                    stats[s, 3] += 1.0
        u[idx] = x
        v[idx] = y
        alive[idx] = live


class Ensemble:
    """Mutable trajectory set, advanced step chunk by step chunk."""

    def __init__(self, config: EnsembleConfig):
        self.config = config
        n = config.n_trajectories
        self.u = np.empty(n)
        self.v = np.empty(n)
        self.alive = np.empty(n, dtype=np.bool_)
        self.step = 0
        self._blocks = [(s, min(s + BLOCK, n)) for s in range(0, n, BLOCK)]
        g = config.grid
        self._box = np.array([g.u_min, g.u_max, g.v_min, g.v_max])
        init = config.initial
        if isinstance(init, NeuronState):
            args = (float(init.u), float(init.v), 0.0, 0.0, True)
        else:
            if init.var_u < 0 or init.var_v < 0:
                raise ConfigError("initial variances must be non-negative")
            args = (init.mean_u, init.mean_v, math.sqrt(init.var_u), math.sqrt(init.var_v), False)
        seed = np.uint64(config.master_seed)
        for start, stop in self._blocks:
            _init_block(self.u, self.v, self.alive, start, stop, seed, *args)
        box = self._box
        self.alive &= (self.u >= box[0]) & (self.u <= box[1]) & (self.v >= box[2]) & (self.v <= box[3])

    def observe(self) -> tuple[float, float, float, int]:
        """Current (mean u, mean v, firing fraction, survivors), summed in fixed order."""
        alive = self.alive
        count = int(alive.sum())
        if count == 0:
            return math.nan, math.nan, 0.0, 0
        stats = self._block_reduce(
            [(self.u[s:e][alive[s:e]], self.v[s:e][alive[s:e]]) for s, e in self._blocks]
        )
        return stats[0] / count, stats[1] / count, stats[3] / count, count

    @staticmethod
    def _block_reduce(parts):
        total = np.zeros(4)
        for uu, vv in parts:
            total += (uu.sum(), vv.sum(), len(uu), np.count_nonzero(uu > 0))
        return total

    def advance(self, I1) -> np.ndarray:
        """Advance every trajectory by ``len(I1)`` steps; returns per-step (sum u, sum v, survivors, firing)."""
        cfg = self.config
        p = cfg.params
        I1 = np.ascontiguousarray(I1, dtype=np.float64)
        n = I1.shape[0]
        partial = np.zeros((len(self._blocks), n, 4))
        seed = np.uint64(cfg.master_seed)

        def work(b):
            start, stop = self._blocks[b]
            _advance_block(
                self.u, self.v, self.alive, start, stop, self.step, I1,
                p.a, p.b, p.c, p.D, cfg.dt, seed, self._box, partial[b],
            )

        if cfg.workers > 1 and len(self._blocks) > 1:
            with ThreadPoolExecutor(cfg.workers) as pool:
                list(pool.map(work, range(len(self._blocks))))
        else:
            for b in range(len(self._blocks)):
                work(b)
        self.step += n
        out = np.zeros((n, 4))
        for b in range(len(self._blocks)):
            out += partial[b]
        return out

    def states(self) -> tuple[np.ndarray, np.ndarray]:
        return self.u[self.alive], self.v[self.alive]


def histogram2d(u, v, grid: GridSpec) -> tuple[np.ndarray, int]:
    """Counts on node-centred cells of ``grid`` and the number of points outside them.

    Cell ``(i, j)`` covers ``[u_i - du/2, u_i + du/2) x [v_j - dv/2, v_j + dv/2)``.
    """
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    iu = np.floor((u - grid.u_min) / grid.du + 0.5).astype(np.int64)
    iv = np.floor((v - grid.v_min) / grid.dv + 0.5).astype(np.int64)
    inside = (iu >= 0) & (iu < grid.n_u) & (iv >= 0) & (iv < grid.n_v)
    counts = np.zeros(grid.shape, dtype=np.int64)
    np.add.at(counts, (iu[inside], iv[inside]), 1)
    return counts, int(np.count_nonzero(~inside))


def run_ensemble(config: EnsembleConfig, chunk: int = 2000) -> EnsembleRun:
    """Integrate the whole ensemble and collect mean trajectories.

    Drives without feedback are evaluated ahead of time and integrated in
    chunks; feedback drives need the firing fraction after every step, so the
    loop then goes one step at a time.
    """
    ens = Ensemble(config)
    n_steps = config.n_steps
    dt = config.dt
    t = dt * np.arange(n_steps + 1)
    mean_u = np.empty(n_steps + 1)
    mean_v = np.empty(n_steps + 1)
    frac = np.empty(n_steps + 1)
    alive = np.empty(n_steps + 1, dtype=np.int64)
    I1 = np.full(n_steps + 1, np.nan)
    mean_u[0], mean_v[0], frac[0], alive[0] = ens.observe()

    def record(k0, stats):
        cnt = stats[:, 2]
        with np.errstate(invalid="ignore", divide="ignore"):
            mean_u[k0 + 1 : k0 + 1 + len(cnt)] = stats[:, 0] / cnt
            mean_v[k0 + 1 : k0 + 1 + len(cnt)] = stats[:, 1] / cnt
            frac[k0 + 1 : k0 + 1 + len(cnt)] = np.where(cnt > 0, stats[:, 3] / np.maximum(cnt, 1), 0.0)
        alive[k0 + 1 : k0 + 1 + len(cnt)] = cnt

    if feedback_terms(config.drive):
        loop = FeedbackLoop(config.drive, dt, frac[0])
        for k in range(n_steps):
            I1[k] = loop.input(k * dt, frac[k])
            record(k, ens.advance(I1[k : k + 1]))
            loop.after_step(frac[k])
    else:
        for k in range(n_steps):
            I1[k] = current(config.drive, k * dt)
        for k0 in range(0, n_steps, chunk):
            k1 = min(k0 + chunk, n_steps)
            record(k0, ens.advance(I1[k0:k1]))

    hist, outside = histogram2d(*ens.states(), config.grid)
    return EnsembleRun(
        t=t, mean_u=mean_u, mean_v=mean_v, n=frac, I1=I1, surviving=alive,
        final_histogram=hist, outside_histogram=outside,
        absorbed=config.n_trajectories - int(alive[-1]), config=config,
    )


class FeedbackLoop:
    """Delay buffers for every feedback term of a drive, wired in causal order.

    For step ``k`` the input is evaluated from ``n`` at step ``k - capacity``;
    the firing fraction at the start of the step is pushed once the step is
    taken.  A zero-delay term sees the current fraction.
    """

    def __init__(self, drive: DriveSpec, dt: float, n0: float):
        self.drive = drive
        self.buffers = {fb: DelayBuffer(fb.delta_T, dt, n0) for fb in feedback_terms(drive)}

    def input(self, t: float, n_now: float) -> float:
        for buf in self.buffers.values():
            if buf.capacity == 0:
                buf.push(n_now)
        return current(self.drive, t, self.buffers)

    def after_step(self, n_now: float) -> None:
        for buf in self.buffers.values():
            if buf.capacity > 0:
                buf.push(n_now)


__all__ = [
    "BLOCK", "GaussianInit", "EnsembleConfig", "EnsembleRun", "Ensemble", "em_step",
    "histogram2d", "run_ensemble", "FeedbackLoop",
]
