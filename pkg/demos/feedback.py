"""
Delayed mean-field feedback synchronizes the population
=======================================================

Every neuron receives ``A * n(t - dT)``, the fraction of the population
that was firing a moment ago.  With the right amount of noise this closes a
loop: a few spontaneous spikes recruit more, the population fires together,
then recovers together.
"""

from dataclasses import replace

from fhnsync.config import Sweep
from fhnsync.presets import preset
from fhnsync.scenarios import run_sweep

cfg = replace(preset("S3:noise"), t_end=100.0)
for D, rep in run_sweep(cfg).rows:
    run = rep.primary
    period = 1 / run.dominant_frequency if run.dominant_frequency else float("inf")
    print(f"D={D:<6g} n_max={run.n_max:.3f}  period={period:.2f}")

###############################################################################
# Longer delays weaken the collective rhythm and slow it down.  Past a
# delay of about 0.8 it dies out and the population fires at a steady rate.

cfg = replace(preset("S4"), t_end=100.0, sweep=Sweep("delay", (0.2, 0.5, 0.92)))
for delay, rep in run_sweep(cfg).rows:
    run = rep.primary
    print(f"delay={delay:.2f}  n_max={run.n_max:.3f}  f={run.dominant_frequency:.4f}")
