import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fhnsync.errors import ConfigError
from fhnsync.model import (
    FhnParams, NeuronState, Response, classify_response, drift, rest_state, rk4_trajectory,
)

P = FhnParams()


def test_defaults():
    assert (P.a, P.b, P.c, P.D) == (0.7, 0.8, 10.0, 0.0)


@pytest.mark.parametrize("kw", [dict(b=0.0), dict(c=-1.0), dict(D=-1e-3), dict(a=math.nan)])
def test_bad_params(kw):
    with pytest.raises(ConfigError):
        FhnParams(**kw)


def test_drift_at_origin():
    assert drift(P, NeuronState(0.0, 0.0), 0.0) == pytest.approx((0.0, 0.7))


def test_drift_at_unit_u():
    du, dv = drift(P, NeuronState(1.0, 0.0), 0.0)
    assert du == pytest.approx(20.0 / 3.0)
    assert dv == pytest.approx(1.7)


def test_rest_state_matches_cubic_roots():
    # nullclines meet where u^3 + 0.75 u + 2.625 = 0
    roots = np.roots([1.0, 0.0, 0.75, 2.625])
    u_ref = min(r.real for r in roots if abs(r.imag) < 1e-12)
    s = rest_state(P)
    assert s.u == pytest.approx(u_ref, abs=1e-10)
    assert s.v == pytest.approx((u_ref + 0.7) / 0.8, abs=1e-10)
    assert s.u == pytest.approx(-1.1994, abs=1e-4)
    assert s.v == pytest.approx(-0.6243, abs=1e-4)


def test_rest_state_is_fixed_point():
    du, dv = drift(P, rest_state(P), 0.0)
    assert abs(du) < 1e-9 and abs(dv) < 1e-9


def test_rest_state_symmetric_case():
    s = rest_state(FhnParams(a=0.0))
    assert abs(s.u) < 1e-12 and abs(s.v) < 1e-12


def test_rest_state_picks_most_negative_root():
    # b large enough for three intersections
    p = FhnParams(a=0.0, b=2.0)
    roots = np.roots([1.0, 0.0, 3.0 * (1.0 / p.b - 1.0), 0.0])
    s = rest_state(p)
    assert s.u == pytest.approx(min(roots.real), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(I=st.floats(-2.0, 2.0))
def test_rest_state_residual(I):
    s = rest_state(P, I)
    assert abs(s.u - s.u**3 / 3 + I - s.v) < 1e-10
    assert abs(s.u - P.b * s.v + P.a) < 1e-10


@settings(max_examples=100)
@given(
    u=st.floats(-5, 5), v=st.floats(-3, 3), a=st.floats(-2, 2), I=st.floats(-2, 2),
    b=st.floats(0.1, 3), c=st.floats(0.1, 20),
)
def test_drift_odd_symmetry(u, v, a, I, b, c):
    p, q = FhnParams(a=a, b=b, c=c), FhnParams(a=-a, b=b, c=c)
    fwd = drift(p, NeuronState(u, v), I)
    rev = drift(q, NeuronState(-u, -v), -I)
    assert rev[0] == pytest.approx(-fwd[0], abs=1e-9)
    assert rev[1] == pytest.approx(-fwd[1], abs=1e-9)


def test_rk4_against_scipy():
    from scipy.integrate import solve_ivp

    def rhs(t, y):
        return drift(P, NeuronState(*y), 0.2)

    ref = solve_ivp(rhs, (0, 5), [-1.0, -0.55], rtol=1e-10, atol=1e-12, t_eval=[5.0])
    ours = rk4_trajectory(P, NeuronState(-1.0, -0.55), 0.2, 5.0)
    assert ours.shape == (5001, 2)
    assert np.allclose(ours[-1], ref.y[:, -1], atol=1e-6)


@pytest.mark.parametrize("A, expected", [
    (0.5, Response.OSCILLATORY), (0.1, Response.REST), (0.0, Response.REST),
])
def test_classify_examples(A, expected):
    assert classify_response(P, A) is expected


def test_classify_monotone_with_single_threshold():
    amps = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]
    labels = [classify_response(P, A) is Response.OSCILLATORY for A in amps]
    assert labels == sorted(labels)
    first = labels.index(True)
    assert amps[first - 1] == 0.3 and amps[first] == 0.4


def test_classify_rejects_noise():
    with pytest.raises(ConfigError):
        classify_response(FhnParams(D=0.01), 0.5)
