import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from modflow.conformal import (
    BASIS,
    PLANES,
    ConformalMap,
    GeneratorField,
    boost_matrix,
    bracket_field,
    bracket_table,
    compose,
    conformal_factor,
    correspondence_check,
    inversion_identities_check,
    is_lorentz,
    lie_bracket,
    pseudo_ortho_embed,
    pseudo_ortho_interval,
    pseudo_ortho_project,
    pseudo_rotation_matrix,
    random_lorentz,
    run_suite,
)
from modflow.errors import ChartBoundary, DomainError, SingularPoint
from modflow.geometry import E0, interval

small = arrays(np.float64, 4, elements=st.floats(-2, 2))


def test_elementary_maps():
    x = np.array([0.3, 1.2, -0.4, 0.5])
    np.testing.assert_allclose(ConformalMap.translation([1, 0, 0, 0])(x), x + E0)
    np.testing.assert_allclose(ConformalMap.dilation(2.0)(x), 2 * x)
    np.testing.assert_allclose(ConformalMap.inversion()(x), -x / interval(x))
    np.testing.assert_array_equal(ConformalMap.special_conformal(np.zeros(4))(x), x)


def test_invalid_maps_rejected():
    with pytest.raises(DomainError):
        ConformalMap.dilation(-1.0)
    with pytest.raises(DomainError):
        ConformalMap.lorentz(np.diag([1.0, 2.0, 1.0, 1.0]))
    with pytest.raises(DomainError):
        ConformalMap("shear")


def test_singular_points_raise():
    with pytest.raises(SingularPoint):
        ConformalMap.inversion()([1.0, 1.0, 0, 0])
    c = np.array([0.5, 0.0, 0.0, 0.0])
    # 1 - 2 x.c + x^2 c^2 vanishes at x = c / c^2
    with pytest.raises(SingularPoint):
        ConformalMap.special_conformal(c)(c / interval(c))


@settings(max_examples=50)
@given(small, small)
def test_sct_is_inversion_translation_inversion(x, c):
    sct = ConformalMap.special_conformal(c)
    f, _ = compose(ConformalMap.inversion(), ConformalMap.translation(c), ConformalMap.inversion())
    try:
        a, b = sct(x, eps_sing=1e-3), f(x)
    except SingularPoint:
        return
    # minus-sign convention: x -> (x - x^2 c) / (1 - 2 x.c + x^2 c^2)
    np.testing.assert_allclose(a, b, rtol=1e-6, atol=1e-6)


def test_distance_law_for_sct(rng):
    c = np.array([0.1, 0.2, -0.1, 0.05])
    m = ConformalMap.special_conformal(c)
    x, y = rng.uniform(-1, 1, (2, 50, 4))
    lhs = interval(m(x) - m(y))
    rhs = interval(x - y) / (conformal_factor(m, x) * conformal_factor(m, y))
    np.testing.assert_allclose(lhs, rhs, rtol=1e-10, atol=1e-12)


def test_lorentz_helpers(rng):
    assert is_lorentz(boost_matrix(0.7))
    assert is_lorentz(random_lorentz(rng))


def test_generator_field_values():
    np.testing.assert_allclose(BASIS["D"].field([1.0, 2.0, 0, 0]), [1, 2, 0, 0])
    np.testing.assert_allclose(BASIS["P2"].field(np.zeros(4)), [0, 0, 1, 0])
    with pytest.raises(DomainError):
        GeneratorField.M(np.ones((4, 4)))


def test_bracket_antisymmetric(rng):
    x = rng.normal(size=(10, 4))
    a, b = BASIS["K1"], BASIS["M02"]
    np.testing.assert_allclose(bracket_field(a, b, x), -bracket_field(b, a, x), atol=1e-12)


def test_dilation_scales_translations(rng):
    # [D, P_mu] = -P_mu at vector-field level
    fit = lie_bracket(BASIS["D"], BASIS["P1"], rng.normal(size=(20, 4)))
    assert fit.coefficients["P1"] == pytest.approx(-1.0, abs=1e-12)
    assert fit.residual < 1e-12


def test_bracket_table_all_ten(rng):
    rep = bracket_table(rng)
    assert len(rep.checks) == 10 and rep.passed
    assert rep.resolved["KP_swapped_order_deviation"] > 1.0


@given(small)
def test_embedding_lands_on_null_cone(x):
    p = pseudo_ortho_embed(x)
    g = np.diag([1.0, -1, -1, -1, -1, 1])
    assert abs(p.xi @ g @ p.xi) < 1e-9 * (1 + np.sum(x**2)) ** 2
    np.testing.assert_allclose(pseudo_ortho_project(p), x, atol=1e-12)
    assert pseudo_ortho_interval(p) == pytest.approx(interval(x), abs=1e-9)


def test_projection_chart_boundary():
    with pytest.raises(ChartBoundary):
        pseudo_ortho_project(np.array([1.0, 0, 0, 0, 1.0, -1.0]))


@pytest.mark.parametrize("plane", PLANES)
def test_pseudo_rotations_identity_and_isometry(plane):
    np.testing.assert_allclose(pseudo_rotation_matrix(plane, 0.0), np.eye(6))
    T = pseudo_rotation_matrix(plane, 0.37)
    g = np.diag([1.0, -1, -1, -1, -1, 1])
    np.testing.assert_allclose(T.T @ g @ T, g, atol=1e-14)


def test_unknown_plane():
    with pytest.raises(DomainError):
        pseudo_rotation_matrix("T99", 0.1)


def test_correspondence_and_inversion(rng):
    assert correspondence_check(rng).passed
    assert inversion_identities_check(200, rng).passed
    with pytest.raises(DomainError):
        inversion_identities_check(10, rng)


def test_suite_passes(rng):
    rep = run_suite(rng)
    assert rep.passed, rep.failures()
