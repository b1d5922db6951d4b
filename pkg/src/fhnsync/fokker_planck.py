"""Finite-difference Fokker-Planck solver for the noisy FitzHugh-Nagumo neuron.

The density obeys

    d rho/dt = -d/dv[(u - b v + a) rho] - d/du[c(-v + u - u^3/3 + I1) rho]
               + D c^2 d^2 rho/du^2

on a rectangle with absorbing (rho = 0) edges.  Each time step is split by
direction and the sweep order alternates from one step to the next.

u-direction: drift and diffusion together, backward Euler, one tridiagonal
solve per v-line.  Face fluxes are exponentially fitted (Scharfetter-Gummel),
which stays positive and resolves the thin drift/diffusion layers near the
slow manifold; plain upwind fluxes are available as ``scheme="upwind"``.

v-direction: pure transport with velocity ``u - b v + a``, which is affine in
``v`` on each u-column.  The default ``"remap"`` moves cell masses along the
exact characteristics (piecewise-linear, slope-limited reconstruction), so it
is conservative, positive and free of a CFL limit.  ``"implicit"`` is
backward-Euler upwind instead.

Fluxes are in conservative form, so whatever leaves through the boundary
faces is exactly the mass lost, and it is booked in
``DensityField.leaked_mass``.

Arrays are indexed ``values[i, j] = rho(u_i, v_j)``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numba
import numpy as np
import scipy.linalg

from .errors import ConfigError, EmptyDensity, GridError, StabilityError
from .model import FhnParams

SCHEMES = ("fitted", "upwind", "characteristic")

# densities below this are flushed to zero (and booked as leaked) so that
# subnormal arithmetic never slows the kernels down
_TINY = 1e-200

#: roundoff allowance for negative densities produced by the solves
NEGATIVE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class GridSpec:
    u_min: float = -4.5
    u_max: float = 4.5
    v_min: float = -2.34
    v_max: float = 2.34
    du: float = 0.03
    dv: float = 0.013

    def __post_init__(self):
        if not (self.du > 0 and self.dv > 0):
            raise GridError("cell sizes must be positive")
        if not (self.u_max > self.u_min and self.v_max > self.v_min):
            raise GridError("empty domain")
        for span, h, name in ((self.u_max - self.u_min, self.du, "u"), (self.v_max - self.v_min, self.dv, "v")):
            ratio = span / h
            if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
                raise GridError(f"{name}-extent is not a whole number of cells ({ratio!r})")
            if round(ratio) < 2:
                raise GridError(f"need at least one interior {name}-node")

    @property
    def n_u(self) -> int:
        return int(round((self.u_max - self.u_min) / self.du)) + 1

    @property
    def n_v(self) -> int:
        return int(round((self.v_max - self.v_min) / self.dv)) + 1

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_u, self.n_v

    @property
    def u(self) -> np.ndarray:
        return _nodes(self.u_min, self.u_max, self.n_u, self.du)

    @property
    def v(self) -> np.ndarray:
        return _nodes(self.v_min, self.v_max, self.n_v, self.dv)

    @property
    def cell_area(self) -> float:
        return self.du * self.dv

    def contains(self, u: float, v: float) -> bool:
        return self.u_min <= u <= self.u_max and self.v_min <= v <= self.v_max

    def refined(self, factor: int = 2) -> "GridSpec":
        return GridSpec(self.u_min, self.u_max, self.v_min, self.v_max, self.du / factor, self.dv / factor)


def _nodes(lo, hi, n, h):
    x = lo + h * np.arange(n)
    x[-1] = hi
    # snap the node that should sit on zero, so the u = 0 column is exact
    x[np.abs(x) < 1e-9 * h] = 0.0
    return x


@dataclass
class DensityField:
    """Probability density sampled at the grid nodes plus mass bookkeeping."""

    grid: GridSpec
    values: np.ndarray
    time: float = 0.0
    leaked_mass: float = 0.0
    steps: int = 0

    def copy(self) -> "DensityField":
        return DensityField(self.grid, self.values.copy(), self.time, self.leaked_mass, self.steps)


@dataclass(frozen=True)
class FpStepConfig:
    params: FhnParams = dc_field(default_factory=FhnParams)
    dt: float = 0.01
    #: u-direction treatment: "characteristic" (exact-flow remap plus exact
    #: diffusion), "fitted" (exponentially fitted fluxes) or "upwind"
    scheme: str = "characteristic"
    #: v-transport: "remap" (exact characteristics) or "implicit" (upwind, backward Euler)
    v_transport: str = "remap"
    #: backward-Euler substeps per u-sweep
    u_substeps: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigError("dt must be positive")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if self.v_transport not in ("remap", "implicit"):
            raise ConfigError(f"unknown v-transport {self.v_transport!r}")
        if int(self.u_substeps) < 1:
            raise ConfigError("u_substeps must be at least 1")


def zero_field(grid: GridSpec) -> DensityField:
    return DensityField(grid, np.zeros(grid.shape))


def init_gaussian(
    grid: GridSpec,
    mean_u: float = -1.0,
    mean_v: float = -0.55,
    var_u: float = 0.05,
    var_v: float = 0.013,
) -> DensityField:
    """Product Gaussian sampled at the nodes, renormalized to unit mass.

    The defaults are the resting-network initial condition used throughout.
    """
    if not (var_u > 0 and var_v > 0):
        raise GridError("variances must be positive")
    if not grid.contains(mean_u, mean_v):
        raise GridError(f"mean ({mean_u}, {mean_v}) lies outside the grid")
    gu = np.exp(-0.5 * (grid.u - mean_u) ** 2 / var_u)
    gv = np.exp(-0.5 * (grid.v - mean_v) ** 2 / var_v)
    values = np.outer(gu, gv)
    values[[0, -1], :] = 0.0
    values[:, [0, -1]] = 0.0
    values /= values.sum() * grid.cell_area
    return DensityField(grid, values)


def total_mass(field: DensityField) -> float:
    return float(field.values.sum() * field.grid.cell_area)


def moments(field: DensityField) -> tuple[float, float, float, float]:
    """``(mean_u, mean_v, var_u, var_v)`` of the density renormalized to its surviving mass."""
    rho = field.values
    mass = rho.sum()
    if mass * field.grid.cell_area < 1e-12:
        raise EmptyDensity("density carries no mass")
    u, v = field.grid.u, field.grid.v
    pu = rho.sum(axis=1) / mass
    pv = rho.sum(axis=0) / mass
    mu = float(pu @ u)
    mv = float(pv @ v)
    return mu, mv, float(pu @ (u - mu) ** 2), float(pv @ (v - mv) ** 2)


def _supra_weights(grid: GridSpec) -> np.ndarray:
    w = (grid.u > 0).astype(float)
    w[grid.u == 0.0] = 0.5
    return w


def supra_fraction(field: DensityField) -> float:
    """Fraction of the surviving probability with ``u > 0`` (the firing population)."""
    rho = field.values
    mass = rho.sum()
    if mass * field.grid.cell_area < 1e-12:
        raise EmptyDensity("density carries no mass")
    return float(_supra_weights(field.grid) @ rho.sum(axis=1) / mass)


def density_mode(field: DensityField) -> tuple[float, float]:
    i, j = np.unravel_index(np.argmax(field.values), field.values.shape)
    return float(field.grid.u[i]), float(field.grid.v[j])


@numba.njit(cache=True, inline="always")
def _fitted_right(a, kappa, e_face, e_line):
    """Weight of the right-hand density in an exponentially fitted face flux.

    The flux is ``(wr + a) * rho_left - wr * rho_right`` with
    ``wr = kappa * B(a / kappa)``, ``B(p) = p / (exp(p) - 1)``.  ``exp(p)`` is
    assembled from per-face and per-line factors when both are finite.
    """
    p = a / kappa
    if p > 36.0:
        return 0.0
    if p < -36.0:
        return -a
    if abs(p) < 1e-4:
        return kappa * (1.0 - 0.5 * p + p * p / 12.0)
    if e_face > 0.0 and e_line > 0.0:
        ex = e_face * e_line
    else:
        ex = math.exp(p)
    return a / (ex - 1.0)


@numba.njit(cache=True)
def _sweep_u(rho, u, v, c, D, I1, dt, du, dv, fitted):
    # all v-lines are eliminated together so the inner loop runs along
    # contiguous memory
    n_u, n_v = rho.shape
    r = dt / du
    kappa = D * c * c / du
    fitted = fitted and kappa > 0.0
    drift = np.empty(n_u - 1)
    e_face = np.zeros(n_u - 1)
    for f in range(n_u - 1):
        x = u[f] + 0.5 * du
        drift[f] = c * (x - x * x * x / 3.0 + I1)
        if fitted and abs(drift[f] / kappa) < 600.0:
            e_face[f] = math.exp(drift[f] / kappa)
    cv = np.empty(n_v)
    e_line = np.zeros(n_v)
    for j in range(n_v):
        cv[j] = c * v[j]
        if fitted and abs(cv[j] / kappa) < 600.0:
            e_line[j] = math.exp(-cv[j] / kappa)
    gamma = np.empty((n_u, n_v))
    wl_prev = np.empty(n_v)
    wr_prev = np.empty(n_v)
    wl_first = np.empty(n_v)
    wr_first = np.empty(n_v)
    for j in range(1, n_v - 1):
        a_face = drift[0] - cv[j]
        if fitted:
            wr = _fitted_right(a_face, kappa, e_face[0], e_line[j])
            wl = wr + a_face
        else:
            wl = max(a_face, 0.0) + kappa
            wr = max(-a_face, 0.0) + kappa
        wl_prev[j] = wl
        wr_prev[j] = wr
        wr_first[j] = wr
        wl_first[j] = wl
    # forward elimination, interior nodes i = 1 .. n_u - 2
    for i in range(1, n_u - 1):
        for j in range(1, n_v - 1):
            a_face = drift[i] - cv[j]
            if fitted:
                wr = _fitted_right(a_face, kappa, e_face[i], e_line[j])
                wl = wr + a_face
            else:
                wl = max(a_face, 0.0) + kappa
                wr = max(-a_face, 0.0) + kappa
            lo = -r * wl_prev[j]
            di = 1.0 + r * (wl + wr_prev[j])
            up = -r * wr
            if i == 1:
                b = di
                rho[i, j] = rho[i, j] / b
            else:
                b = di - lo * gamma[i, j]
                rho[i, j] = (rho[i, j] - lo * rho[i - 1, j]) / b
            gamma[i + 1, j] = up / b
            wl_prev[j] = wl
            wr_prev[j] = wr
    for i in range(n_u - 3, 0, -1):
        for j in range(1, n_v - 1):
            rho[i, j] -= gamma[i + 1, j] * rho[i + 1, j]
    # outward flux through the two boundary faces, boundary nodes are zero;
    # after the loop wl_prev holds the last face
    leak = 0.0
    for j in range(1, n_v - 1):
        leak += wr_first[j] * rho[1, j] + wl_prev[j] * rho[n_u - 2, j]
    return leak * dt * dv


@numba.njit(cache=True)
def _factor_v(u, v, a, b, dt, dv):
    # the v-operator does not depend on time, so its LU factors are reused
    n_u, n_v = u.shape[0], v.shape[0]
    r = dt / dv
    lower = np.zeros((n_u, n_v))
    inv_beta = np.zeros((n_u, n_v))
    gamma = np.zeros((n_u, n_v))
    out_flux = np.zeros((n_u, 2))
    for i in range(1, n_u - 1):
        beta = 1.0
        for j in range(1, n_v - 1):
            left = u[i] - b * (v[j] - 0.5 * dv) + a
            right = u[i] - b * (v[j] + 0.5 * dv) + a
            lo = -r * max(left, 0.0)
            di = 1.0 + r * (max(right, 0.0) - min(left, 0.0))
            up = r * min(right, 0.0)
            beta = di if j == 1 else di - lo * gamma[i, j]
            lower[i, j] = lo
            inv_beta[i, j] = 1.0 / beta
            gamma[i, j + 1] = up / beta
        out_flux[i, 0] = -min(u[i] - b * (v[0] + 0.5 * dv) + a, 0.0)
        out_flux[i, 1] = max(u[i] - b * (v[n_v - 1] - 0.5 * dv) + a, 0.0)
    return lower, inv_beta, gamma, out_flux


@numba.njit(cache=True)
def _sweep_v(rho, lower, inv_beta, gamma, out_flux, dt, du):
    # lines along v are eliminated side by side; independent lines in the
    # inner loop keep the recurrence from serializing
    n_u, n_v = rho.shape
    for i in range(1, n_u - 1):
        rho[i, 1] = rho[i, 1] * inv_beta[i, 1]
    for j in range(2, n_v - 1):
        for i in range(1, n_u - 1):
            rho[i, j] = (rho[i, j] - lower[i, j] * rho[i, j - 1]) * inv_beta[i, j]
    for j in range(n_v - 3, 0, -1):
        for i in range(1, n_u - 1):
            rho[i, j] -= gamma[i, j + 1] * rho[i, j + 1]
    leak = 0.0
    for i in range(1, n_u - 1):
        leak += out_flux[i, 0] * rho[i, 1] + out_flux[i, 1] * rho[i, n_v - 2]
    return leak * dt * du


@numba.njit(cache=True, inline="always")
def _mc_slope(left, mid, right, h):
    # monotonized-central limited slope; keeps cell-edge values between neighbours
    d1 = mid - left
    d2 = right - mid
    if d1 * d2 <= 0.0:
        return 0.0
    dc = 0.5 * (d1 + d2)
    s = min(abs(dc), 2.0 * abs(d1), 2.0 * abs(d2))
    return (s if dc > 0 else -s) / h


@numba.njit(cache=True)
def _remap_v(rho, u, v, a, b, dt, du, dv):
    """Transport along v by the exact flow of dv/dt = u - b v + a.

    At fixed u the flow is affine in v, so the preimage of every cell is an
    interval of known end points.  Each new cell mass is the integral of the
    old density, reconstructed piecewise linearly with limited slopes, over
    that preimage.  Positive, conservative and free of a step-size limit.
    """
    n_u, n_v = rho.shape
    stretch = math.exp(b * dt)
    e0 = v[0] - 0.5 * dv
    width = n_v * dv
    cum = np.empty(n_v + 1)
    slope = np.empty(n_v)
    old = np.empty(n_v)
    leak = 0.0
    for i in range(1, n_u - 1):
        v_inf = (u[i] + a) / b
        col = rho[i]
        old[:] = col
        cum[0] = 0.0
        before = 0.0
        for j in range(n_v):
            left = col[j - 1] if j > 0 else 0.0
            right = col[j + 1] if j < n_v - 1 else 0.0
            slope[j] = _mc_slope(left, col[j], right, dv)
            cum[j + 1] = cum[j] + col[j] * dv
            before += col[j]
        # cumulative old mass up to the preimage of each new cell edge; the
        # preimages are equally spaced, so the containing cell is found by walking
        w0 = v_inf + (e0 - v_inf) * stretch - e0
        step = dv * stretch
        inv_dv = 1.0 / dv
        k = 0
        prev = 0.0
        for j in range(n_v + 1):
            w = w0 + j * step
            if w <= 0.0:
                m = 0.0
            elif w >= width:
                m = cum[n_v]
            else:
                if j == 0 or k == 0:
                    k = int(w * inv_dv)
                while k + 1 < n_v and (k + 1) * dv <= w:
                    k += 1
                xi = w - k * dv
                m = cum[k] + old[k] * xi + slope[k] * xi * (xi - dv) * 0.5
            if j > 0:
                val = (m - prev) * inv_dv
                col[j - 1] = val if val > _TINY else 0.0
            prev = m
        # boundary cells are absorbing
        col[0] = 0.0
        col[n_v - 1] = 0.0
        after = 0.0
        for j in range(n_v):
            after += col[j]
        leak += before - after
    return leak * du * dv


@numba.njit(cache=True)
def _pull_back(x, c, s, dt, m):
    """RK4 for the backward flow of du/dt = c (u - u^3/3 + s), in place on ``x``.

    Edges are advanced side by side so independent updates overlap.
    """
    h = dt / m
    third = 1.0 / 3.0
    for _ in range(m):
        for k in range(x.shape[0]):
            x0 = x[k]
            k1 = -c * (x0 - x0 * x0 * x0 * third + s)
            y = x0 + 0.5 * h * k1
            k2 = -c * (y - y * y * y * third + s)
            y = x0 + 0.5 * h * k2
            k3 = -c * (y - y * y * y * third + s)
            y = x0 + h * k3
            k4 = -c * (y - y * y * y * third + s)
            # far outside the box nothing is carried in; clamp before overflow
            x[k] = min(max(x0 + h * (k1 + 2.0 * (k2 + k3) + k4) * (1.0 / 6.0), -50.0), 50.0)


@numba.njit(cache=True)
def _remap_u(rho, u, v, c, I1, dt, du, dv, m):
    """Transport along u by the flow of du/dt = c (-v + u - u^3/3 + I1).

    Same construction as :func:`_remap_v`, but the flow is cubic, so the
    preimage of each cell edge is traced with ``m`` RK4 substeps.
    """
    n_u, n_v = rho.shape
    e0 = u[0] - 0.5 * du
    width = n_u * du
    inv_du = 1.0 / du
    pre = np.empty(n_u + 1)
    col = np.empty(n_u)
    slope = np.empty(n_u)
    cum = np.empty(n_u + 1)
    leak = 0.0
    for j in range(1, n_v - 1):
        s = I1 - v[j]
        before = 0.0
        for i in range(n_u):
            col[i] = rho[i, j]
            before += col[i]
        if before == 0.0:
            continue
        cum[0] = 0.0
        for i in range(n_u):
            left = col[i - 1] if i > 0 else 0.0
            right = col[i + 1] if i < n_u - 1 else 0.0
            slope[i] = _mc_slope(left, col[i], right, du)
            cum[i + 1] = cum[i] + col[i] * du
        for k in range(n_u + 1):
            pre[k] = e0 + k * du
        _pull_back(pre, c, s, dt, m)
        prev = 0.0
        last = -1e300
        after = 0.0
        for k in range(n_u + 1):
            x = pre[k]
            if not x >= last:
                x = last
            last = x
            w = x - e0
            if w <= 0.0:
                mk = 0.0
            elif w >= width:
                mk = cum[n_u]
            else:
                q = min(int(w * inv_du), n_u - 1)
                xi = w - q * du
                mk = cum[q] + col[q] * xi + slope[q] * xi * (xi - du) * 0.5
            if k > 0:
                val = (mk - prev) * inv_du
                if not val > _TINY:
                    val = 0.0
                if k == 1 or k == n_u:
                    val = 0.0
                rho[k - 1, j] = val
                after += val
            prev = mk
        leak += before - after
    return leak * du * dv


@numba.njit(cache=True)
def _diffuse_u(rho, r, cell_area):
    """Backward-Euler diffusion along u (``r = D c^2 dt / du^2``), zero edges."""
    n_u, n_v = rho.shape
    before = 0.0
    for i in range(n_u):
        for j in range(n_v):
            before += rho[i, j]
    # the matrix is the same on every line: one set of Thomas coefficients
    cp = np.empty(n_u)
    b = 1.0 + 2.0 * r
    den = b
    cp[1] = -r / den
    for j in range(n_v):
        rho[0, j] = 0.0
        rho[n_u - 1, j] = 0.0
        rho[1, j] = rho[1, j] / den
    for i in range(2, n_u - 1):
        den = b + r * cp[i - 1]
        cp[i] = -r / den
        for j in range(n_v):
            rho[i, j] = (rho[i, j] + r * rho[i - 1, j]) / den
    for i in range(n_u - 3, 0, -1):
        g = cp[i]
        for j in range(n_v):
            rho[i, j] -= g * rho[i + 1, j]
    after = 0.0
    for i in range(n_u):
        for j in range(n_v):
            after += rho[i, j]
    return (before - after) * cell_area


@functools.lru_cache(maxsize=16)
def _heat_matrix(n_interior: int, r: float) -> np.ndarray:
    lap = np.diag(np.full(n_interior, -2.0)) + np.diag(np.ones(n_interior - 1), 1) + np.diag(np.ones(n_interior - 1), -1)
    prop = scipy.linalg.expm(r * lap)
    # entrywise positive in exact arithmetic; clip roundoff and drop
    # subnormal-range entries, which only slow the products down
    prop[prop < _TINY] = 0.0
    return prop


def _diffuse_u_exact(rho: np.ndarray, r: float, cell_area: float) -> float:
    """Exact step of the discrete heat equation along u (``r = D c^2 dt / du^2``).

    Applies the matrix exponential of the three-point Laplacian with zero
    edges, a non-negative matrix, so positivity holds exactly.
    """
    inner = rho[1:-1]
    before = inner.sum()
    rho[1:-1] = _heat_matrix(inner.shape[0], r) @ inner
    return (before - rho[1:-1].sum()) * cell_area


@functools.lru_cache(maxsize=8)
def _v_operator(grid: GridSpec, a: float, b: float, dt: float):
    return _factor_v(grid.u, grid.v, a, b, dt, grid.dv)


def fp_step(field: DensityField, cfg: FpStepConfig, I1: float, *, inplace: bool = False) -> DensityField:
    """Advance the density by ``cfg.dt`` with input current ``I1`` held fixed."""
    out = field if inplace else field.copy()
    g = out.grid
    p = cfg.params
    rho = out.values
    u, v = g.u, g.v
    fitted = cfg.scheme == "fitted"
    start_min = rho.min()
    if not start_min >= -NEGATIVE_TOLERANCE:
        raise StabilityError(f"density entering the step at t={out.time:.4g} has minimum {start_min:.3g}")
    if cfg.v_transport == "remap":
        def along_v():
            return _remap_v(rho, u, v, p.a, p.b, cfg.dt, g.du, g.dv)
    else:
        v_op = _v_operator(g, p.a, p.b, cfg.dt)

        def along_v():
            return _sweep_v(rho, *v_op, cfg.dt, g.du)

    m = int(cfg.u_substeps)
    if cfg.scheme == "characteristic":
        r = p.D * p.c**2 * cfg.dt / g.du**2

        def advect():
            return _remap_u(rho, u, v, p.c, float(I1), cfg.dt, g.du, g.dv, 4 * m)

        def diffuse():
            return _diffuse_u_exact(rho, r, g.cell_area) if r > 0 else 0.0

        # palindromic over two steps: A D V | V D A
        ops = (advect, diffuse, along_v) if out.steps % 2 == 0 else (along_v, diffuse, advect)
    else:
        def along_u():
            return sum(_sweep_u(rho, u, v, p.c, p.D, float(I1), cfg.dt / m, g.du, g.dv, fitted) for _ in range(m))

        ops = (along_u, along_v) if out.steps % 2 == 0 else (along_v, along_u)
    leak = 0.0
    for op in ops:
        leak += op()

    lowest = rho.min()
    if not np.isfinite(lowest) or not np.isfinite(leak):
        raise StabilityError(f"non-finite density at t={out.time + cfg.dt:.4g}")
    if lowest < 0:
        if lowest < -NEGATIVE_TOLERANCE:
            raise StabilityError(f"density fell to {lowest:.3g} at t={out.time + cfg.dt:.4g}")
        neg = rho < 0
        leak += rho[neg].sum() * g.cell_area
        rho[neg] = 0.0
    out.leaked_mass += leak
    out.steps += 1
    out.time += cfg.dt
    return out


# -- snapshot text format ----------------------------------------------------

_HEADER_KEYS = ("u_min", "u_max", "v_min", "v_max", "du", "dv", "n_u", "n_v", "time", "total_mass", "leaked_mass")


def write_snapshot(field: DensityField, path) -> Path:
    """Write a density snapshot.

    Layout: ``# key = value`` header lines for the grid, time, total and
    leaked mass, then ``n_v`` rows of ``n_u`` values (row ``j`` holds
    ``rho(u_0..u_{n_u-1}, v_j)``), 9 significant digits.
    """
    g = field.grid
    header = {
        "u_min": g.u_min, "u_max": g.u_max, "v_min": g.v_min, "v_max": g.v_max,
        "du": g.du, "dv": g.dv, "n_u": g.n_u, "n_v": g.n_v,
        "time": field.time, "total_mass": total_mass(field), "leaked_mass": field.leaked_mass,
    }
    path = Path(path)
    lines = [f"# {k} = {header[k]:.9g}" if isinstance(header[k], float) else f"# {k} = {header[k]}" for k in _HEADER_KEYS]
    with path.open("w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
        np.savetxt(fh, field.values.T, fmt="%.9g", delimiter=" ")
    return path


def read_snapshot(path) -> DensityField:
    meta = {}
    with Path(path).open() as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, _, val = line[1:].partition("=")
            meta[key.strip()] = float(val)
    grid = GridSpec(meta["u_min"], meta["u_max"], meta["v_min"], meta["v_max"], meta["du"], meta["dv"])
    values = np.loadtxt(path, comments="#", ndmin=2).T
    if values.shape != grid.shape:
        raise GridError(f"snapshot body {values.shape} does not match grid {grid.shape}")
    return DensityField(grid, np.ascontiguousarray(values), meta["time"], meta["leaked_mass"])


__all__ = [
    "GridSpec", "DensityField", "FpStepConfig", "zero_field", "init_gaussian", "fp_step",
    "moments", "supra_fraction", "total_mass", "density_mode", "write_snapshot", "read_snapshot",
    "NEGATIVE_TOLERANCE", "SCHEMES",
]
