import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modflow.errors import DomainError, LifetimeBoundary
from modflow.geometry import W_R, contains
from modflow.thermal import (
    SERIES_THRESHOLD,
    ObserverRegion,
    ObserverSpec,
    boost_orbit,
    boost_orbit_vector,
    cone_temperature,
    diamond_temperature,
    run_suite,
    unruh_temperature,
)

TWO_PI = 2 * math.pi
pos = st.floats(1e-3, 50.0)


def test_unruh():
    assert unruh_temperature(TWO_PI) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        unruh_temperature(0.0)


def test_cone_exact_at_zero():
    assert cone_temperature(1.0, 0.0) == 1 / TWO_PI
    assert cone_temperature(2.0, 0.0, rho0=0.5) == 1 / math.pi


@given(st.floats(0.01, 5.0), st.floats(-3, 3), st.floats(-1, 1))
def test_cone_thermal_time_shift(a, tau, d):
    assert cone_temperature(a, tau + d) == pytest.approx(math.exp(-a * d) * cone_temperature(a, tau), rel=1e-12)


def test_diamond_limit_across_threshold():
    for k in (0.0, 0.5, 0.999, 1.001, 2.0, 10.0):
        assert diamond_temperature(k * SERIES_THRESHOLD, 1.0, 0.0) == pytest.approx(1 / math.pi, abs=1e-8)


@given(st.floats(0.01, 20.0), st.floats(0.05, 5.0))
def test_diamond_even_with_minimum_at_center(a, L):
    tmax = ObserverSpec(a, ObserverRegion.DOUBLE_CONE, L).lifetime()
    tau = np.linspace(-0.99, 0.99, 201) * tmax
    T = diamond_temperature(a, L, tau)
    np.testing.assert_allclose(T, T[::-1], rtol=1e-10)
    assert np.argmin(T) == 100
    assert T[100] >= unruh_temperature(a) * (1 - 1e-12)


@given(pos, pos, st.floats(-0.9, 0.9), st.floats(0.1, 10.0))
def test_dimensional_scaling(a, L, frac, kappa):
    tau = frac * ObserverSpec(a, ObserverRegion.DOUBLE_CONE, L).lifetime()
    lhs = diamond_temperature(kappa * a, L / kappa, tau / kappa)
    assert lhs == pytest.approx(kappa * diamond_temperature(a, L, tau), rel=1e-9)


def test_diamond_diverges_and_raises():
    spec = ObserverSpec(2.0, ObserverRegion.DOUBLE_CONE, 1.0)
    tmax = spec.lifetime()
    near = diamond_temperature(2.0, 1.0, tmax * (1 - np.geomspace(1e-2, 1e-8, 7)))
    assert np.all(np.diff(near) > 0) and near[-1] > 1e4 * near[0]
    with pytest.raises(LifetimeBoundary):
        diamond_temperature(2.0, 1.0, 1.01 * tmax)
    with pytest.raises(LifetimeBoundary):
        diamond_temperature(0.0, 1.0, 1.0)


def test_observer_spec():
    assert ObserverSpec(1.0).lifetime() == math.inf
    assert ObserverSpec(0.0, ObserverRegion.DOUBLE_CONE, 2.0).lifetime() == 2.0
    assert ObserverSpec(1.0, ObserverRegion.WEDGE).temperature(3.0) == pytest.approx(1 / TWO_PI)
    with pytest.raises(DomainError):
        ObserverSpec(-1.0)
    with pytest.raises(DomainError):
        ObserverSpec(1.0, ObserverRegion.DOUBLE_CONE, 0.0)


def test_boost_orbit_in_wedge():
    pts = boost_orbit(1.3, np.linspace(-4, 4, 41))
    assert np.all(contains(W_R, pts))
    v = boost_orbit_vector(2.0, 0.0)
    assert (v.x0, v.x1) == (0.0, 0.5)


def test_suite_passes():
    rep = run_suite()
    assert rep.passed, rep.failures()
