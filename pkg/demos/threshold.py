"""
Where a single neuron starts to fire
====================================

A constant current pushes the rest state of the FitzHugh-Nagumo neuron along
the cubic nullcline.  Past a critical amplitude the fixed point loses
stability and a spike train appears.  We bracket that amplitude by bisection.
"""

from fhnsync import FhnParams, Response, classify_response, rest_state

params = FhnParams(D=0.0)
rest = rest_state(params)
print(f"rest state without input: u={rest.u:.4f}  v={rest.v:.4f}")

###############################################################################
# Coarse scan first.

for A in (0.1, 0.2, 0.3, 0.4, 0.5):
    print(f"A={A:.2f}  {classify_response(params, A).value}")

###############################################################################
# Then bisect between the last quiet and first spiking amplitude.

lo, hi = 0.3, 0.4
while hi - lo > 1e-3:
    mid = 0.5 * (lo + hi)
    if classify_response(params, mid) is Response.OSCILLATORY:
        hi = mid
    else:
        lo = mid
print(f"threshold between {lo:.4f} and {hi:.4f}")
