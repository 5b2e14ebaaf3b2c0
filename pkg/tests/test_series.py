import json
import math

import numpy as np
import pytest

from gdop.series import (
    AnalyticSeries,
    DivergenceError,
    TruncationError,
    TruncationPolicy,
    builtin,
    derivative_coefficients,
    exp_series,
    inv_two_minus_z,
    load_coefficient_file,
    monomial,
    polynomial,
    resolve_function,
    sin_series,
    standard_test_set,
    truncation_order,
)


def test_radius_must_exceed_one():
    with pytest.raises(ValueError):
        AnalyticSeries("bad", 1.0, lambda p: 1.0)


def test_standard_set_labels():
    assert [f.label for f in standard_test_set()] == ["exp", "inv_2_minus_z", "sin", "e2", "e5"]


@pytest.mark.parametrize("f", [exp_series(), sin_series(), inv_two_minus_z()], ids=lambda f: f.label)
def test_series_matches_function(f):
    z = np.array([0.3 + 0.4j, -0.9, 0.5j])
    P, _ = truncation_order(f, 1.0, TruncationPolicy())
    assert np.allclose(np.polynomial.polynomial.polyval(z, f.coeffs(P)), f(z), rtol=1e-13, atol=1e-14)


@pytest.mark.parametrize("f", [exp_series(), inv_two_minus_z()], ids=lambda f: f.label)
@pytest.mark.parametrize("P", [3, 10, 25])
def test_tail_bound_is_a_bound(f, P):
    r = 1.3
    actual = sum(abs(f.coefficient(p)) * r**p for p in range(P + 1, 400))
    assert actual <= f.tail_bound(P, r) * (1 + 1e-12)


def test_truncation_orders():
    pol = TruncationPolicy(1e-14)
    assert truncation_order(monomial(5), 1.0, pol) == (5, 0.0)
    P, tail = truncation_order(exp_series(), 1.0, pol)
    assert P == 32 and tail < 1e-14
    P, _ = truncation_order(inv_two_minus_z(), 1.0, pol)
    assert P == 92


def test_truncation_errors():
    with pytest.raises(DivergenceError):
        truncation_order(inv_two_minus_z(), 2.0, TruncationPolicy())
    with pytest.raises(TruncationError):
        truncation_order(inv_two_minus_z(), 1.9, TruncationPolicy(1e-14, max_terms=20))


def test_decay_check():
    f = AnalyticSeries("liar", 3.0, lambda p: 1.0, majorant=(1.0, 3.0))
    with pytest.raises(DivergenceError):
        truncation_order(f, 1.0, TruncationPolicy())


def test_derivative_coefficients():
    c = np.array([5, 1, 1, 1], dtype=complex)
    assert derivative_coefficients(c, 1).tolist() == [1, 2, 3]
    assert derivative_coefficients(c, 2).tolist() == [2, 6]
    assert derivative_coefficients(c, 4).tolist() == [0]


def test_polynomial_and_builtin():
    p = polynomial("q", [1, 0, 2, 0])
    assert p.degree == 2 and p(np.array([2.0]))[0] == 9
    assert builtin("e3").degree == 3
    with pytest.raises(KeyError):
        builtin("cosh")


def test_coefficient_file(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"label": "cubic", "radius": 5.0, "coeffs": [[1, 0], [0, 1], [0, 0], [2, 0]]}))
    f = resolve_function(str(path))
    assert f.label == "cubic" and f.degree == 3 and f.radius == 5.0
    assert f(np.array([1.0]))[0] == 3 + 1j
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"label": "x"}))
    with pytest.raises(ValueError):
        load_coefficient_file(bad)


def test_sin_coefficients():
    f = sin_series()
    assert [f.coefficient(p) for p in range(4)] == [0, 1, 0, -1 / 6]
    assert math.isinf(f.radius)
