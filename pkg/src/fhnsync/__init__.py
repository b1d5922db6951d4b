"""Noise-induced synchronization of FitzHugh-Nagumo neural ensembles.

Two routes to the same statistics: a Monte Carlo ensemble of stochastic
trajectories (:mod:`fhnsync.sde`) and a finite-difference solver for the
density (:mod:`fhnsync.fokker_planck`).  Drives, delayed feedback and
spectral analysis live in :mod:`fhnsync.drive` and :mod:`fhnsync.spectral`;
:mod:`fhnsync.scenarios` wires everything together.
"""
from .config import ScenarioConfig, Sweep, load_config, save_config
from .drive import Constant, DelayBuffer, Feedback, Periodic, Sum, current
from .errors import FhnError
from .fokker_planck import (
    DensityField, FpStepConfig, GridSpec, density_mode, fp_step, init_gaussian, moments, read_snapshot,
    supra_fraction, total_mass, write_snapshot,
)
from .model import FhnParams, NeuronState, Response, classify_response, drift, rest_state
from .presets import preset
from .scenarios import emit_outputs, run_fokker_planck, run_monte_carlo, run_scenario, run_sweep
from .sde import EnsembleConfig, GaussianInit, em_step, histogram2d, run_ensemble
from .spectral import TimeSeries, dominant_frequency, periodogram, snr

__version__ = "0.1.0"
