"""FitzHugh-Nagumo vector field, fixed points and the deterministic threshold.

The single-neuron equations are

    du/dt = c (-v + u - u**3/3 + I1(t)) + c sqrt(2 D) xi(t)
    dv/dt = u - b v + a

Only the deterministic part lives here; noise is handled by :mod:`fhnsync.sde`
and :mod:`fhnsync.fokker_planck`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numba
import numpy as np

from .errors import ConfigError, NoConvergence


@dataclass(frozen=True)
class FhnParams:
    """Model constants of one neuron plus the noise intensity ``D``."""

    a: float = 0.7
    b: float = 0.8
    c: float = 10.0
    D: float = 0.0

    def __post_init__(self):
        if not (self.b > 0 and self.c > 0 and self.D >= 0):
            raise ConfigError(f"need b > 0, c > 0, D >= 0; got {self}")
        for name in ("a", "b", "c", "D"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")

    def with_noise(self, D: float) -> "FhnParams":
        return replace(self, D=D)


@dataclass(frozen=True)
class NeuronState:
    u: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise ConfigError(f"state must be finite, got ({self.u}, {self.v})")

    def __iter__(self):
        yield self.u
        yield self.v


class Response(enum.Enum):
    REST = "rest"
    OSCILLATORY = "oscillatory"


def drift(params: FhnParams, state, I1: float = 0.0) -> tuple[float, float]:
    """Deterministic right-hand side ``(du/dt, dv/dt)``.

    Works elementwise on arrays as well as on scalars.
    """
    u, v = state
    du = params.c * (-v + u - u**3 / 3.0 + I1)
    dv = u - params.b * v + params.a
    return du, dv


def _nullcline_mismatch(u, params, I_const):
    # zero where the u- and v-nullclines intersect
    return u - u**3 / 3.0 + I_const - (u + params.a) / params.b


def rest_state(params: FhnParams, I_const: float = 0.0, max_iter: int = 200) -> NeuronState:
    """Fixed point of the noiseless system under constant input.

    When the nullclines cross more than once the crossing with the most
    negative ``u`` is returned.  The root is bracketed analytically, narrowed
    by bisection and polished with Newton steps.
    """
    g = lambda u: _nullcline_mismatch(u, params, I_const)  # noqa: E731
    dg = lambda u: 1.0 - u * u - 1.0 / params.b  # noqa: E731

    # g -> +inf as u -> -inf; g decreases left of its first critical point
    k = 1.0 - 1.0 / params.b
    bound = 1.0 + 3.0 * max(abs(k), abs(I_const - params.a / params.b))
    lo = -bound
    if k > 0:
        crit = math.sqrt(k)
        hi = -crit if g(-crit) <= 0 else bound
        if hi == bound:
            lo = crit
    else:
        hi = bound
    if not (g(lo) >= 0 >= g(hi)):
        raise NoConvergence("could not bracket the rest state")

    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-6:
            break
    else:
        raise NoConvergence("bisection did not converge")

    u = 0.5 * (lo + hi)
    for _ in range(max_iter):
        slope = dg(u)
        if slope == 0:
            break
        step = g(u) / slope
        u_new = u - step
        if not lo - 1e-6 <= u_new <= hi + 1e-6:
            break
        u = u_new
        if abs(step) < 1e-15 * max(1.0, abs(u)):
            break
    if abs(g(u)) > 1e-10:
        raise NoConvergence(f"residual {g(u):.3g} after polishing")
    v = (u + params.a) / params.b
    return NeuronState(u, v)


@numba.njit(cache=True)
def _rk4_const(a, b, c, I1, u0, v0, dt, n_steps):
    out = np.empty((n_steps + 1, 2))
    u, v = u0, v0
    out[0, 0] = u
    out[0, 1] = v
    for k in range(n_steps):
        k1u = c * (-v + u - u**3 / 3.0 + I1)
        k1v = u - b * v + a
        uu = u + 0.5 * dt * k1u
        vv = v + 0.5 * dt * k1v
        k2u = c * (-vv + uu - uu**3 / 3.0 + I1)
        k2v = uu - b * vv + a
        uu = u + 0.5 * dt * k2u
        vv = v + 0.5 * dt * k2v
        k3u = c * (-vv + uu - uu**3 / 3.0 + I1)
        k3v = uu - b * vv + a
        uu = u + dt * k3u
        vv = v + dt * k3v
        k4u = c * (-vv + uu - uu**3 / 3.0 + I1)
        k4v = uu - b * vv + a
        u = u + dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        out[k + 1, 0] = u
        out[k + 1, 1] = v
    return out


def rk4_trajectory(params: FhnParams, start, I1: float, t_end: float, dt: float = 1e-3) -> np.ndarray:
    """Noiseless trajectory under constant input, fixed-step classical RK4.

    Returns an ``(n_steps + 1, 2)`` array of ``(u, v)`` samples spaced by ``dt``.
    """
    if dt <= 0 or t_end <= 0:
        raise ConfigError("dt and t_end must be positive")
    n_steps = int(round(t_end / dt))
    u0, v0 = start
    return _rk4_const(params.a, params.b, params.c, float(I1), float(u0), float(v0), dt, n_steps)


def classify_response(params: FhnParams, A: float, horizon: float = 100.0, dt: float = 1e-3) -> Response:
    """Decide whether constant input ``A`` drives the noiseless neuron into spiking.

    Starts from the unforced rest state nudged by +0.01 in ``u`` and counts
    upward zero crossings of ``u`` in the second half of the horizon; two or
    more means a sustained spike train.
    """
    if params.D != 0:
        raise ConfigError("classification is defined for D = 0 only")
    rest = rest_state(params, 0.0)
    traj = rk4_trajectory(params, (rest.u + 0.01, rest.v), A, horizon, dt)
    u = traj[len(traj) // 2 :, 0]
    ups = np.count_nonzero((u[:-1] <= 0.0) & (u[1:] > 0.0))
    return Response.OSCILLATORY if ups >= 2 else Response.REST
