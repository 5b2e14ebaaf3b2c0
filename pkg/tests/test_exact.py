from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdop.exact import COMPLEX, ModeMismatchError, Poly, as_exact, binomial, poly_eval

small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=12)
polys = st.lists(small_fracs, max_size=6).map(Poly)


def test_add_cancellation():
    assert Poly([1, 1]) + Poly([0, -1]) == Poly([1])


def test_add_identity():
    p = Poly([3, 0, Fraction(1, 2)])
    assert Poly.zero() + p == p


def test_add_disjoint_degrees():
    assert Poly([0, 0, 1]) + Poly([0, 2]) == Poly([0, 2, 1])


def test_mul_examples():
    assert Poly([1, -1]) * Poly([1, 1]) == Poly([1, 0, -1])
    assert Poly([0, 1]) * Poly.monomial(4) == Poly.monomial(5)
    assert Poly([1, -1]) * Poly([1, -1]) * Poly([0, 1]) == Poly([0, 1, -2, 1])


def test_derivative_examples():
    assert Poly([0, 0, 1]).derivative() == Poly([0, 2])
    assert Poly([7]).derivative().is_zero()
    assert Poly([0, 1, -2, 1]).derivative() == Poly([1, -4, 3])


def test_eval_examples():
    assert poly_eval(Poly([0, 0, 1]), 1 + 1j) == 2j
    assert poly_eval(Poly([1]), 3.7 - 2j) == 1
    assert poly_eval(Poly([1, 0, -1]), Fraction(1)) == 0


def test_exact_eval_is_fraction():
    v = Poly([Fraction(1, 3), 2]).__call__(Fraction(1, 2))
    assert isinstance(v, Fraction) and v == Fraction(4, 3)


def test_binomial_examples():
    assert binomial(4, 2) == 6
    assert binomial(3, -1) == 0
    assert binomial(5, 5) == 1
    assert binomial(3, 4) == 0


def test_normalized_leading_coefficient():
    p = Poly([1, 2, 0, 0])
    assert p.degree == 1 and p.coeffs[-1] != 0
    assert Poly([0, 0]).degree == -1


def test_mode_mismatch():
    with pytest.raises(ModeMismatchError):
        Poly([1]) + Poly([1], COMPLEX)
    with pytest.raises(ModeMismatchError):
        Poly([1]) * Poly([1j], COMPLEX)


def test_decimal_strings_rejected():
    with pytest.raises(ValueError, match="ratio"):
        as_exact("0.5")
    with pytest.raises(TypeError):
        as_exact(0.5)
    assert as_exact("2/6") == Fraction(1, 3)


def test_complex_rounding_once():
    p = Poly([Fraction(1, 3), Fraction(2, 3)]).to_complex()
    assert p.mode == COMPLEX
    assert p.coeffs == (complex(1 / 3), complex(2 / 3))


@given(polys, polys, small_fracs)
def test_eval_multiplicative(a, b, z):
    assert (a * b)(z) == a(z) * b(z)


@given(polys, polys)
def test_product_rule(a, b):
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


@settings(max_examples=200)
@given(st.integers(1, 40), st.integers(-3, 43))
def test_pascal(a, b):
    assert binomial(a, b) == binomial(a - 1, b - 1) + binomial(a - 1, b)
