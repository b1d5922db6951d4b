import math

import numpy as np
import pytest
from scipy import stats

from fhnsync.drive import Constant
from fhnsync.errors import ConfigError
from fhnsync.fokker_planck import FpStepConfig, GridSpec, fp_step, init_gaussian
from fhnsync.model import FhnParams, NeuronState, rk4_trajectory
from fhnsync.sde import EnsembleConfig, GaussianInit, em_step, histogram2d, run_ensemble

P = FhnParams()


def test_em_step_deterministic():
    s = em_step(P, NeuronState(0.0, 0.0), 0.0, 0.01, 0.0)
    assert (s.u, s.v) == pytest.approx((0.0, 0.007))


def test_em_step_noise_scale():
    s = em_step(FhnParams(D=0.005), NeuronState(0.0, 0.0), 0.0, 0.01, 1.0)
    assert (s.u, s.v) == pytest.approx((0.1, 0.007))


def test_em_step_zero_draw_ignores_noise():
    a = em_step(FhnParams(D=0.3), NeuronState(0.4, -0.2), 0.1, 0.01, 0.0)
    b = em_step(P, NeuronState(0.4, -0.2), 0.1, 0.01, 0.0)
    assert a == b


@pytest.mark.parametrize("kw", [dict(dt=0.0), dict(dt=-0.01), dict(n_trajectories=0), dict(t_end=0.005)])
def test_config_errors(kw):
    with pytest.raises(ConfigError):
        EnsembleConfig(**kw)


def _python_em(params, start, I1, dt, n):
    s = NeuronState(*start)
    out = [s.u]
    for _ in range(n):
        s = em_step(params, s, I1, dt, 0.0)
        out.append(s.u)
    return np.array(out)


def test_noiseless_ensemble_is_one_trajectory():
    cfg = EnsembleConfig(P, Constant(0.2), n_trajectories=37, t_end=5.0, initial=NeuronState(-1.0, -0.55))
    run = run_ensemble(cfg)
    ref = _python_em(P, (-1.0, -0.55), 0.2, 0.01, cfg.n_steps)
    assert run.t.size == cfg.n_steps + 1 == 501
    assert np.allclose(run.mean_u, ref, rtol=0, atol=1e-12)


def test_noiseless_mean_against_rk4():
    start = NeuronState(-1.0, -0.55)
    run = run_ensemble(EnsembleConfig(P, n_trajectories=4, t_end=50.0, initial=start))
    ref = rk4_trajectory(P, start, 0.0, 50.0, dt=1e-3)[::10, 0]
    assert np.abs(run.mean_u - ref).max() < 0.05


def test_rerun_is_bit_identical():
    cfg = EnsembleConfig(FhnParams(D=0.005), n_trajectories=700, t_end=3.0, master_seed=11)
    a, b = run_ensemble(cfg), run_ensemble(cfg)
    assert np.array_equal(a.mean_u, b.mean_u) and np.array_equal(a.final_histogram, b.final_histogram)


def test_worker_count_does_not_matter():
    base = dict(params=FhnParams(D=0.02), n_trajectories=1500, t_end=3.0, master_seed=3)
    runs = [run_ensemble(EnsembleConfig(workers=w, **base)) for w in (1, 2, 5)]
    for r in runs[1:]:
        assert np.array_equal(r.mean_u, runs[0].mean_u)
        assert np.array_equal(r.n, runs[0].n)
        assert np.array_equal(r.final_histogram, runs[0].final_histogram)


def test_seed_changes_result():
    a = run_ensemble(EnsembleConfig(FhnParams(D=0.005), n_trajectories=300, t_end=1.0, master_seed=1))
    b = run_ensemble(EnsembleConfig(FhnParams(D=0.005), n_trajectories=300, t_end=1.0, master_seed=2))
    assert not np.array_equal(a.mean_u, b.mean_u)


def test_absorbed_trajectories_leave_histogram():
    box = GridSpec(u_min=-1.5, u_max=1.5, v_min=-1.2, v_max=1.2, du=0.1, dv=0.1)
    cfg = EnsembleConfig(FhnParams(D=0.05), Constant(0.5), n_trajectories=800, t_end=10.0, grid=box)
    run = run_ensemble(cfg)
    assert run.absorbed > 0
    assert run.final_histogram.sum() == cfg.n_trajectories - run.absorbed
    assert run.surviving[-1] == cfg.n_trajectories - run.absorbed
    assert np.all(np.diff(run.surviving) <= 0)


def test_histogram_empty(grid):
    counts, outside = histogram2d([], [], grid)
    assert counts.shape == grid.shape and counts.sum() == 0 and outside == 0


def test_histogram_single_state(grid):
    counts, _ = histogram2d([grid.u[17]], [grid.v[250]], grid)
    assert counts[17, 250] == 1 and counts.sum() == 1


def test_histogram_half_open():
    # a state on a bin edge belongs to the bin above it
    g = GridSpec(u_min=-1.0, u_max=1.0, v_min=-1.0, v_max=1.0, du=0.25, dv=0.25)
    counts, _ = histogram2d([-0.875, -0.875], [0.125, 0.0], g)
    assert counts[1, 5] == 1 and counts[1, 4] == 1 and counts.sum() == 2


def test_histogram_outside(grid):
    counts, outside = histogram2d([9.0, 0.0], [0.0, -7.0], grid)
    assert counts.sum() == 0 and outside == 2


def test_histogram_against_gaussian(grid):
    r = np.random.default_rng(5)
    n = 100_000
    u = -1.0 + math.sqrt(0.05) * r.standard_normal(n)
    v = -0.55 + math.sqrt(0.013) * r.standard_normal(n)
    counts, _ = histogram2d(u, v, grid)
    ue = np.r_[grid.u - grid.du / 2, grid.u[-1] + grid.du / 2]
    ve = np.r_[grid.v - grid.dv / 2, grid.v[-1] + grid.dv / 2]
    pu = np.diff(stats.norm.cdf(ue, -1.0, math.sqrt(0.05)))
    pv = np.diff(stats.norm.cdf(ve, -0.55, math.sqrt(0.013)))
    expected = n * np.outer(pu, pv)
    big = expected > 100
    assert big.sum() > 10
    # Poisson scatter is 10% at 100 counts, so bins are judged in standard deviations
    assert np.all(np.abs(counts[big] - expected[big]) < 5 * np.sqrt(expected[big]))
    chi2 = ((counts[big] - expected[big]) ** 2 / expected[big]).sum()
    assert stats.chi2.sf(chi2, big.sum()) > 1e-3
    # pooled over all qualifying bins the relative error is small
    assert abs(counts[big].sum() / expected[big].sum() - 1) < 0.05


def test_ensemble_initial_moments():
    cfg = EnsembleConfig(n_trajectories=50_000, t_end=0.02, initial=GaussianInit())
    run = run_ensemble(cfg)
    assert run.mean_u[0] == pytest.approx(-1.0, abs=0.005)
    assert run.mean_v[0] == pytest.approx(-0.55, abs=0.005)


def test_weak_convergence_in_dt():
    means = []
    for dt in (0.01, 0.005):
        run = run_ensemble(EnsembleConfig(FhnParams(D=0.005), n_trajectories=10_000, dt=dt, t_end=200.0, master_seed=9))
        means.append(run.mean_u[run.t >= 100.0 - 1e-9].mean())
    assert abs(means[0] - means[1]) < 0.02


@pytest.mark.slow
def test_stationary_density_matches_fokker_planck(grid):
    # 1e5 samples over ~1e5 cells: multinomial noise alone puts the raw L1
    # distance near 0.24, so compare against that floor and on 2x2 blocks
    mc = run_ensemble(EnsembleConfig(FhnParams(D=0.005), n_trajectories=100_000, t_end=200.0, master_seed=21))
    f = init_gaussian(grid)
    cfg = FpStepConfig(FhnParams(D=0.005))
    for _ in range(20_000):
        fp_step(f, cfg, 0.0, inplace=True)
    p = f.values / f.values.sum()
    h = mc.final_histogram / mc.final_histogram.sum()
    r = np.random.default_rng(0)
    floor = np.mean([np.abs(r.multinomial(100_000, p.ravel()).reshape(p.shape) / 1e5 - p).sum() for _ in range(4)])
    assert np.abs(h - p).sum() - floor < 0.02

    def blocks(a):
        n0, n1 = a.shape[0] // 2 * 2, a.shape[1] // 2 * 2
        return a[:n0, :n1].reshape(n0 // 2, 2, n1 // 2, 2).sum(axis=(1, 3))

    assert np.abs(blocks(h) - blocks(p)).sum() < 0.15