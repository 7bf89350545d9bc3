import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modflow.errors import DomainError, WindowTooSmall
from modflow.freefield import (
    C0_MASSLESS,
    BogoliubovKernel,
    PauliJordanEvaluator,
    R_kernel,
    RadialFunction,
    TwoPointEvaluator,
    bogoliubov_beta_apply,
    boost_points,
    f_rest_kernel,
    hs_probe,
    kg_residual,
    kms_boost_check,
    mass_shift_exact,
    mass_shift_multiplier,
    pauli_jordan,
    radial_gaussian,
    rel_l2_radial,
    run_suite,
    two_point,
    two_point_closed,
    two_point_radial,
    unruh_from_kms,
)

TWO_PI = 2 * math.pi
pt = st.lists(st.floats(-1.5, 1.5), min_size=4, max_size=4).map(np.array)


def test_massless_constant():
    assert C0_MASSLESS == pytest.approx(-1 / (4 * math.pi**2))
    # spacelike separation r = 1 at eps -> 0 gives 1/(4 pi^2)
    assert two_point_closed(0.0, 1.0, 1e-12).real == pytest.approx(1 / (4 * math.pi**2))


def test_evaluator_validation():
    with pytest.raises(DomainError):
        TwoPointEvaluator(m=-1.0)
    with pytest.raises(DomainError):
        TwoPointEvaluator(epsilon=0.0)
    with pytest.raises(DomainError):
        two_point(1.0, np.zeros(4), np.ones(4), method="closed")


@settings(max_examples=20, deadline=None)
@given(pt, pt)
def test_massless_hermiticity(x, y):
    a = two_point(0.0, x, y, 0.1)
    b = two_point(0.0, y, x, 0.1)
    assert abs(a - np.conj(b)) <= 1e-12 * abs(a)


def test_quadrature_matches_closed_form():
    x, y = np.array([0.3, 0.2, -0.4, 0.1]), np.array([-0.1, -0.6, 0.5, 0.2])
    q = two_point(0.0, x, y, 0.1, method="quad")
    c = two_point(0.0, x, y, 0.1, method="closed")
    assert abs(q - c) / abs(c) < 1e-6


def test_massive_below_massless_at_spacelike():
    # the massive function decays faster at spacelike distance
    assert abs(two_point_radial(1.0, 0.0, 2.0, 0.05)) < abs(two_point_closed(0.0, 2.0, 0.05))


def test_massless_kg_residual():
    w = lambda t, r: two_point_closed(t, r, 0.1).real
    assert kg_residual(w, 0.0, [0.2, 0.3], [1.0, 1.3], h=1e-2) < 1e-6


def test_pauli_jordan_properties():
    pj = PauliJordanEvaluator(1.0, 0.05)
    assert pj(0.0, 1.0) == 0.0
    assert abs(pj(0.5, 2.0)) < 1e-6
    assert pj(-0.7, 0.4) == pytest.approx(-pj(0.7, 0.4), abs=1e-14)
    with pytest.raises(DomainError):
        pauli_jordan(-1.0, 0.1, 0.1)


@pytest.mark.parametrize("m", [0.0, 1.0])
def test_pauli_jordan_causal_support(m):
    tt = np.array([0.3, 0.6, 1.0])
    outside = np.max(np.abs(pauli_jordan(m, tt, tt + 0.5)))
    inside = np.max(np.abs(pauli_jordan(m, tt, tt)))
    assert outside / inside < 1e-5


def test_boost_points_preserve_interval():
    x = np.array([0.2, 1.0, 0.3, -0.1])
    X = boost_points(np.linspace(-2, 2, 9), x)
    q = X[:, 0] ** 2 - np.sum(X[:, 1:] ** 2, axis=1)
    np.testing.assert_allclose(q, x[0] ** 2 - np.sum(x[1:] ** 2))


def test_kms_beta_and_unruh():
    rep = kms_boost_check((0, 1, 0, 0), (0, 1, 0.5, 0), eps=1e-3)
    assert rep.passed
    beta = rep.resolved["kms_beta"]
    assert beta == pytest.approx(TWO_PI, rel=0.02)
    assert unruh_from_kms(beta, 2.0) == pytest.approx(2.0 / TWO_PI, rel=0.02)


def test_kms_validation():
    with pytest.raises(DomainError):
        kms_boost_check((0, -1, 0, 0), (0, 1, 0, 0))
    with pytest.raises(WindowTooSmall):
        kms_boost_check((0, 1, 0, 0), (0, 1, 0.5, 0), T_window=0.5, N_samples=4096, eps=1e-2)


def test_radial_transform_of_gaussian():
    f = RadialFunction.sample(lambda r: np.exp(-(r**2) / 2), 12.8, 255)
    exact = (2 * math.pi) ** 1.5 * np.exp(-(f.k**2) / 2)
    np.testing.assert_allclose(f.transform(), exact, atol=1e-10)
    assert f.norm() == pytest.approx(math.pi**0.75, rel=1e-10)


def test_mass_shift():
    assert float(mass_shift_multiplier(1.7, 1.7)) == pytest.approx(2**-0.25)
    f = radial_gaussian(1.0)
    np.testing.assert_allclose(mass_shift_exact(f, 0.0).values, f.values, atol=1e-12)
    back = mass_shift_exact(mass_shift_exact(f, 1.0), 1.0, inverse=True)
    assert rel_l2_radial(back, f) < 1e-8
    with pytest.raises(DomainError):
        mass_shift_exact(f, -1.0)


def test_R_kernel_stable():
    r = np.array([0.0, 1e-3, 1.0, 1e6])
    out = R_kernel(r, 1.0)
    assert out[0] == 0.0
    # large r: r ((1 + m^2/r^2)^{-1/4} - 1) -> -m^2 / (4 r)
    assert out[-1] == pytest.approx(-0.25e-6, rel=1e-6)
    np.testing.assert_array_equal(R_kernel(r, 0.0), 0.0)


def test_f_rest_massless_is_exactly_zero():
    f = radial_gaussian(0.7)
    assert np.all(f_rest_kernel(f, 0.0).values == 0.0)


def test_bogoliubov_identity():
    k = np.geomspace(1e-3, 1e3, 50)
    b = BogoliubovKernel(0.3, 1.7)
    np.testing.assert_allclose(b.beta("+", k) ** 2 - b.beta("-", k) ** 2, 1.0, atol=1e-12)
    with pytest.raises(DomainError):
        b.beta("x", k)


def test_bogoliubov_equal_masses_trivial():
    f = radial_gaussian(1.0, r_max=12.8, N=255)
    np.testing.assert_allclose(bogoliubov_beta_apply("-", f, 1.0, 1.0).values, 0.0, atol=1e-14)


def test_hs_probe_shrinks_with_window():
    hs = [hs_probe(0.0, 1.0, w) for w in (4.0, 2.0, 1.0)]
    assert hs[0] > hs[1] > hs[2] > 0


def test_suite_quick(rng):
    rep = run_suite(rng, quick=True)
    assert rep.passed, rep.failures()
    assert rep.resolved["f_rest_c"] == pytest.approx(1 / (2 * math.pi**2), rel=1e-3)
