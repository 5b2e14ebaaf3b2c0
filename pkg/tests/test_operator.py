from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdop.moments import monomial_image_closed
from gdop.operator import (
    ContourResolutionError,
    DiskSpec,
    QuadratureError,
    apply_analytic,
    apply_quadrature,
    contour_derivative,
    gauss_legendre_01,
    operator_derivative,
)
from gdop.series import exp_series, inv_two_minus_z, monomial, polynomial, sin_series

from oracles import operator_on_poly

HALF = Fraction(1, 2)
GRID = np.array([0, 0.5, -0.7 + 0.2j, 0.3j, 0.6 - 0.6j])


def test_e1_fixed():
    z = np.array([0.2 + 0.9j, -1, 0.5])
    for n in (2, 7, 40):
        assert np.allclose(apply_analytic(monomial(1), n, Fraction(1, 3), z), z, atol=1e-15)


def test_e2_example():
    assert apply_analytic(monomial(2), 2, HALF, 0.5) == pytest.approx(11 / 24, abs=1e-15)


def test_exp_analytic_vs_quadrature_at_i():
    a = apply_analytic(exp_series(), 10, HALF, 1j, DiskSpec(1.0))
    q = apply_quadrature(np.exp, 1.0, np.e, 10, HALF, 1j)
    assert abs(a - q) < 1e-11


def test_point_outside_disk_rejected():
    with pytest.raises(ValueError):
        apply_analytic(exp_series(), 4, HALF, 1.2, DiskSpec(1.0))


def test_return_bound():
    val, tail = apply_analytic(exp_series(), 4, HALF, 0.3, DiskSpec(1.0), return_bound=True)
    assert tail < 1e-14 and val.imag == pytest.approx(0.0, abs=1e-15)


def test_quadrature_e0():
    v = apply_quadrature(lambda t: np.ones_like(t), 1.0, 1.0, 7, Fraction(1, 3), 0.4 + 0.2j)
    assert abs(v - 1) < 1e-13


@pytest.mark.parametrize("p", range(7))
def test_quadrature_monomials_vs_exact(p):
    a = Fraction(1, 4)
    img = monomial_image_closed(6, a, 6).images[p]
    exact = np.array([complex(img(complex(z))) for z in GRID])
    got = apply_quadrature(lambda t: t**p, 0.0**p, 1.0, 6, a, GRID, degree=p)
    assert np.max(np.abs(got - exact)) <= 1e-12


def test_quadrature_order_one():
    f = lambda t: np.exp(t)
    assert apply_quadrature(f, 1.0, np.e, 1, HALF, 0.5) == pytest.approx((1 + np.e) / 2, abs=1e-15)


def test_quadrature_detects_unresolved_integrand():
    f = lambda t: np.abs(t - 1 / 3) ** 0.5
    with pytest.raises(QuadratureError):
        apply_quadrature(f, f(0.0), f(1.0), 6, HALF, 0.2)


def test_gauss_legendre_exactness():
    t, w = gauss_legendre_01(128)
    assert abs(w.sum() - 1) < 1e-15
    for p in (1, 50, 255):
        assert abs(w @ t**p - 1 / (p + 1)) < 1e-15


def test_derivative_examples():
    e2 = monomial(2)
    assert operator_derivative(e2, 2, HALF, 1, 0.0) == pytest.approx(5 / 6, abs=1e-15)
    vals = operator_derivative(e2, 2, HALF, 2, GRID)
    assert np.allclose(vals, 1 / 3, atol=1e-15)
    assert np.allclose(operator_derivative(monomial(1), 9, HALF, 1, GRID), 1.0)
    with pytest.raises(ValueError):
        operator_derivative(e2, 2, HALF, 0, 0.0)


def test_contour_derivative_examples():
    f, z = exp_series(), 0.3 + 0.1j
    v0 = contour_derivative(f, 8, HALF, 0, z, 1.5, nodes=256)
    assert abs(v0 - apply_analytic(f, 8, HALF, z)) <= 1e-10
    v1 = contour_derivative(f, 8, HALF, 1, z, 1.5, nodes=256)
    assert abs(v1 - operator_derivative(f, 8, HALF, 1, z)) <= 1e-9
    assert abs(contour_derivative(monomial(1), 5, HALF, 1, z, 1.5) - 1) < 1e-12


def test_contour_too_coarse():
    with pytest.raises(ContourResolutionError):
        contour_derivative(exp_series(), 200, HALF, 3, 1.0, 1.01, nodes=16)


def test_contour_point_outside():
    with pytest.raises(ValueError):
        contour_derivative(exp_series(), 4, HALF, 1, 1.6, 1.5)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_analytic_matches_symbolic_oracle(n):
    from gdop.exact import Poly

    coeffs = [Fraction(1, 2), Fraction(-1), Fraction(0), Fraction(1, 3), Fraction(2)]
    a = Fraction(1, 3)
    exact = operator_on_poly(Poly(coeffs), n, a)
    f = polynomial("q", [float(c) for c in coeffs])
    got = apply_analytic(f, n, a, GRID)
    want = np.array([exact(complex(z)) for z in GRID])
    assert np.allclose(got, want, rtol=1e-14, atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(
    st.integers(2, 60),
    st.sampled_from([Fraction(0), Fraction(1, 3), Fraction(1)]),
    st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
)
def test_linearity(n, a, ca, cb):
    f, g = exp_series(), sin_series()
    h = polynomial("h", ca * f.coeffs(40) + cb * g.coeffs(40))
    lhs = apply_analytic(h, n, a, GRID)
    rhs = ca * apply_analytic(f, n, a, GRID) + cb * apply_analytic(g, n, a, GRID)
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12 * (1 + abs(ca) + abs(cb)))


@pytest.mark.parametrize("f", [exp_series(), sin_series(), inv_two_minus_z()], ids=lambda f: f.label)
@pytest.mark.parametrize("n", [2, 9, 50])
def test_endpoint_interpolation(f, n):
    vals = apply_analytic(f, n, Fraction(1, 3), np.array([0.0, 1.0]))
    assert np.allclose(vals, f(np.array([0.0, 1.0])), atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(2, 25),
    st.sampled_from([Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1)]),
    st.integers(0, 12),
    st.floats(1.0, 2.0),
    st.floats(0, 2 * np.pi),
)
def test_monomial_images_bounded(n, a, p, r, theta):
    img = monomial_image_closed(n, a, p).images[p]
    z = r * np.exp(1j * theta)
    assert abs(img(complex(z))) <= r**p * (1 + 1e-12)


def test_disk_spec_validation():
    with pytest.raises(ValueError):
        DiskSpec(0.5)
    with pytest.raises(ValueError):
        DiskSpec(2.0, 2.0)
    assert DiskSpec(1.0).circle(8).shape == (8,)
