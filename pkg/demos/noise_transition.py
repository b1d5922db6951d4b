"""
Noise alone lifts part of the population over threshold
=======================================================

Without input every neuron sits at rest.  Noise spreads the density around
the fixed point, and once it reaches the middle branch of the nullcline a
fraction of the mass takes the long excursion through ``u > 0``.  That
fraction grows much faster than linearly in ``D``.
"""

from dataclasses import replace

from fhnsync import density_mode, rest_state, run_fokker_planck
from fhnsync.model import FhnParams
from fhnsync.presets import preset

# A shorter horizon keeps this demo quick; the fraction settles by t ~ 60.
base = replace(preset("S1a"), t_end=60.0, snapshot_times=())

for D in (0.001, 0.0025, 0.005):
    run = run_fokker_planck(replace(base, params=FhnParams(D=D)))
    print(f"D={D:<7g} n(t_end)={run.n[-1]:.4f}  <u>={run.mean_u[-1]:+.3f}")

###############################################################################
# At weak noise the density stays peaked on the rest state.

run = run_fokker_planck(base)
u, v = density_mode(run.final_density)
rest = rest_state(FhnParams())
print(f"mode ({u:+.3f}, {v:+.3f})  rest ({rest.u:+.3f}, {rest.v:+.3f})")
