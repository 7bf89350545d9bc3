import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modflow.errors import DomainError, DomainViolation, GridEscape
from modflow.grid import rel_l2
from modflow.nonlocal_groups import (
    KmsFlowParams,
    by_flow,
    by_flow_suite,
    by_flow_velocity,
    by_generator_formula,
    by_generator_oracle,
    by_generator_parts,
    by_pullback,
    by_sign_resolution,
    by_spacetime_flow,
    by_test_function,
    decomposition_orders,
    default_by_grid,
    fio_symbol,
    fio_symbol_report,
    resolve_yngvason_constant,
    spacetime_suite,
    yngvason_F,
    yngvason_M,
    yngvason_mass_term,
    yngvason_suite,
    yngvason_test_phi,
    yngvason_V,
)

TWO_PI = 2 * math.pi


@pytest.fixture(scope="module")
def phi():
    return yngvason_test_phi()


@pytest.fixture(scope="module")
def bump():
    return by_test_function()


# ---------------------------------------------------------------- Yngvason


def test_F_requires_mass():
    with pytest.raises(DomainError):
        yngvason_F(0.0, 0.0, 0.3, 0.0)


def test_F_factorizes_M():
    p0, p1 = np.meshgrid(np.linspace(-3, 3, 7), np.linspace(-3, 3, 7))
    np.testing.assert_allclose(yngvason_F(p0, p1, 0.3, 1.0) * yngvason_F(-p0, -p1, 0.3, 1.0), yngvason_M(p0, p1, 0.3, 1.0))


def test_V_identity_and_group_law(phi):
    assert rel_l2(yngvason_V(1.0, phi, 1.0).values, phi.values) < 1e-14
    a = yngvason_V(1.3, yngvason_V(0.8, phi, 1.0), 1.0)
    assert rel_l2(a.values, yngvason_V(1.04, phi, 1.0).values) < 1e-6


def test_V_rejects_escape_and_bad_lambda(phi):
    with pytest.raises(GridEscape):
        yngvason_V(20.0, phi, 1.0)
    with pytest.raises(DomainError):
        yngvason_V(0.0, phi, 1.0)


def test_resolved_constant_is_minus_two_pi(phi):
    c, imag = resolve_yngvason_constant(phi, 1.0)
    assert c == pytest.approx(-TWO_PI, rel=1e-5)
    assert abs(imag) < 1e-4


def test_mass_term_zero_set():
    axis = np.linspace(-5, 5, 41)
    assert np.max(np.abs(yngvason_mass_term(0.0, axis, 0.3, 1.0))) == 0.0
    # does not vanish on the p1 = 0 line away from p0 = 0
    assert np.all(np.abs(yngvason_mass_term(axis[axis != 0], 0.0, 0.3, 1.0)) > 0)


def test_yngvason_suite():
    rep = yngvason_suite()
    assert rep.passed, rep.failures()
    assert rep.resolved["variant_generator_rel_error"] > 0.5


# ------------------------------------------------------------- KMS flows


def test_params_validation():
    with pytest.raises(DomainError):
        KmsFlowParams(0.0)
    assert KmsFlowParams(2.0).a == pytest.approx(math.pi)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 20), st.floats(-0.3, 0.3), st.floats(-0.3, 0.3))
def test_flow_group_law(beta, s, t):
    x = np.linspace(0.0, 4.0, 17)
    lhs = by_flow("+", KmsFlowParams(beta, s), by_flow("+", KmsFlowParams(beta, t), x))
    np.testing.assert_allclose(lhs, by_flow("+", KmsFlowParams(beta, s + t), x), atol=1e-10, rtol=1e-10)


def test_flow_fixes_origin_and_velocity():
    assert by_flow("+", KmsFlowParams(3.0, 0.4), 0.0) == 0.0
    x = np.linspace(-1, 2, 9)
    h = 1e-5
    fd = (by_flow("+", KmsFlowParams(3.0, h), x) - by_flow("+", KmsFlowParams(3.0, -h), x)) / (2 * h)
    np.testing.assert_allclose(fd, by_flow_velocity("+", 3.0, x), rtol=1e-6)


def test_flow_large_beta_is_dilation():
    x = np.linspace(0.1, 3, 10)
    np.testing.assert_allclose(by_flow("+", KmsFlowParams(1e7, 0.2), x), np.exp(-TWO_PI * 0.2) * x, rtol=1e-5)


def test_flow_domain_violation_and_sign():
    with pytest.raises(DomainViolation):
        by_flow("+", KmsFlowParams(1.0, -1.0), -5.0)
    with pytest.raises(DomainError):
        by_flow("*", KmsFlowParams(1.0), 1.0)


def test_flow_suite(rng):
    assert by_flow_suite(rng).passed


def test_grid_needs_zero_node():
    g = default_by_grid(lambda x: np.exp(-x * x), N=1024, dx=0.01, x_min=-3.333)
    with pytest.raises(DomainError):
        by_pullback(0, KmsFlowParams(1.0), g)
    with pytest.raises(DomainError):
        by_pullback(-1, KmsFlowParams(1.0), by_test_function())


def test_pullback_identity_at_t0(bump):
    half = bump.x >= 0
    assert rel_l2(by_pullback(0, KmsFlowParams(5.0), bump).values[half], bump.values[half]) < 1e-12
    assert rel_l2(by_pullback(1, KmsFlowParams(5.0), bump).values[half], bump.values[half]) < 1e-5


@pytest.mark.parametrize("n", [0, 1, 2])
def test_generator_formula_vs_oracle(n, bump):
    half = bump.x >= 0
    a = by_generator_formula(n, 5.0, bump).values[half]
    b = by_generator_oracle(n, 5.0, bump).values[half]
    assert rel_l2(a, b) < (1e-6 if n == 0 else 1e-4)


def test_generator_sign_minus(bump):
    from modflow.nonlocal_groups import _reflect

    fr = _reflect(bump)
    neg = fr.x <= 0
    a = by_generator_formula(1, 5.0, fr, sign="-").values[neg]
    b = by_generator_oracle(1, 5.0, fr, sign="-").values[neg]
    assert rel_l2(a, b) < 1e-4


def test_sign_resolution_prefers_plus(bump):
    res = by_sign_resolution(1, 5.0, bump)
    assert res["sign"] == "+"
    assert res["minus"] > 100 * res["plus"]
    assert res["fio_without_residue"] > 10 * res["plus"]


def test_parts_sum_to_total(bump):
    g = by_generator_parts(2, 5.0, bump)
    tot = g.principal.values + sum(c.values for c in g.fio) + sum(r.values for r in g.residue)
    np.testing.assert_allclose(g.total.values, tot, atol=1e-14)


def test_fio_symbol_bounds():
    xi = np.geomspace(1e-3, 1e6, 50)
    for n in (1, 2, 3):
        a = np.abs(fio_symbol(n, 5.0, xi))
        assert np.all(a <= n + 1e-12)
        assert a[-1] == pytest.approx(n, rel=1e-4)
    assert fio_symbol(2, 5.0, 0.0) == 0


def test_fio_symbol_report():
    assert fio_symbol_report(2, 5.0).passed


def test_decomposition_orders():
    o = decomposition_orders(1, 5.0)
    assert o["principal"] == pytest.approx(1.0, abs=0.1)
    assert o["fio"] == pytest.approx(0.0, abs=0.2)


def test_spacetime_flow_reduces_on_lightcone():
    x = np.array([0.5, 1.0, 2.0])
    a, b = by_spacetime_flow("V+", 5.0, 0.3, x, 0 * x)
    # x1 = 0: both lightcone coordinates flow identically
    np.testing.assert_allclose(b, 0.0, atol=1e-15)
    np.testing.assert_allclose(a, by_flow("+", KmsFlowParams(5.0, 0.3), x))


def test_spacetime_suite():
    assert spacetime_suite().passed
