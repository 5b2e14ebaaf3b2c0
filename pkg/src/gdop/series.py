"""Analytic input functions described by their Taylor coefficients."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .moments import MAX_EXACT_P


class TruncationError(ValueError):
    """The requested tail tolerance cannot be met within ``max_terms``."""


class DivergenceError(ValueError):
    """Coefficients do not decay as the declared radius promises."""


@dataclass(frozen=True)
class AnalyticSeries:
    """``f(z) = sum c_p z^p`` on ``|z| < radius``.

    ``tail(P, r)`` must bound ``sum_{p>P} |c_p| r^p``.  When it is not given
    the geometric majorant ``|c_p| <= M / rho^p`` is used instead.
    """

    label: str
    radius: float
    coefficient: Callable[[int], complex]
    func: Optional[Callable[[np.ndarray], np.ndarray]] = None
    degree: Optional[int] = None
    tail: Optional[Callable[[int, float], float]] = field(default=None, repr=False)
    majorant: Optional[tuple[float, float]] = None

    def __post_init__(self):
        if not self.radius > 1:
            raise ValueError(f"{self.label}: radius of analyticity must exceed 1")

    def coeffs(self, P: int) -> np.ndarray:
        return np.array([complex(self.coefficient(p)) for p in range(P + 1)], dtype=np.complex128)

    def tail_bound(self, P: int, r: float) -> float:
        if self.degree is not None and P >= self.degree:
            return 0.0
        if self.tail is not None:
            return float(self.tail(P, r))
        if self.majorant is None:
            raise DivergenceError(f"{self.label}: no tail bound or majorant declared")
        M, rho = self.majorant
        q = r / rho
        if q >= 1:
            raise DivergenceError(f"{self.label}: r={r} is outside the majorant radius {rho}")
        return M * q ** (P + 1) / (1 - q)

    def is_polynomial_of_degree_at_most(self, d: int) -> bool:
        return self.degree is not None and self.degree <= d

    def check_decay(self, P: int) -> None:
        """Raise when a coefficient up to P breaks the declared majorant."""
        if self.majorant is None:
            return
        M, rho = self.majorant
        for p in range(P + 1):
            if abs(self.coefficient(p)) > M / rho**p * (1 + 1e-12):
                raise DivergenceError(f"{self.label}: |c_{p}| exceeds M/rho^p")

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        if self.func is not None:
            return self.func(z)
        P = self.degree if self.degree is not None else 64
        return np.polynomial.polynomial.polyval(z, self.coeffs(P))


def derivative_coefficients(c: np.ndarray, l: int) -> np.ndarray:
    """Coefficients of the l-th derivative of ``sum c_p z^p``."""
    c = np.asarray(c, dtype=np.complex128)
    if l == 0:
        return c.copy()
    if l >= len(c):
        return np.zeros(1, dtype=np.complex128)
    p = np.arange(l, len(c))
    fall = np.ones(len(p))
    for j in range(l):
        fall *= p - j
    return c[l:] * fall


# --------------------------------------------------------------------------
# Built-in test functions

def _exp_tail(P: int, r: float) -> float:
    # sum_{p>P} r^p / p! <= r^(P+1)/(P+1)! / (1 - r/(P+2))
    if r >= P + 2:
        return math.inf
    return math.exp((P + 1) * math.log(r) - math.lgamma(P + 2)) / (1 - r / (P + 2)) if r > 0 else 0.0


def _inv_factorial(p: int) -> float:
    # underflows to 0.0 instead of raising for large p
    return math.exp(-math.lgamma(p + 1)) if p > 20 else 1.0 / math.factorial(p)


def _sin_coefficient(p: int) -> float:
    if p % 2 == 0:
        return 0.0
    return (-1) ** ((p - 1) // 2) * _inv_factorial(p)


def exp_series() -> AnalyticSeries:
    return AnalyticSeries("exp", math.inf, _inv_factorial, np.exp, tail=_exp_tail)


def sin_series() -> AnalyticSeries:
    return AnalyticSeries("sin", math.inf, _sin_coefficient, np.sin, tail=_exp_tail)


def inv_two_minus_z() -> AnalyticSeries:
    """``1/(2 - z) = sum z^p / 2^(p+1)``, analytic on ``|z| < 2``."""
    return AnalyticSeries(
        "inv_2_minus_z",
        2.0,
        lambda p: 0.5 ** (p + 1),
        lambda z: 1.0 / (2.0 - z),
        majorant=(0.5, 2.0),
    )


def monomial(k: int) -> AnalyticSeries:
    return AnalyticSeries(
        f"e{k}",
        math.inf,
        lambda p: 1.0 if p == k else 0.0,
        lambda z: np.asarray(z, dtype=np.complex128) ** k,
        degree=k,
    )


def polynomial(label: str, coeffs, radius: float = math.inf) -> AnalyticSeries:
    cs = [complex(c) for c in coeffs]
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    arr = np.array(cs, dtype=np.complex128)
    return AnalyticSeries(
        label,
        radius,
        lambda p: cs[p] if p < len(cs) else 0j,
        lambda z: np.polynomial.polynomial.polyval(np.asarray(z, dtype=np.complex128), arr),
        degree=len(cs) - 1,
    )


_BUILTINS = {
    "exp": exp_series,
    "sin": sin_series,
    "inv_2_minus_z": inv_two_minus_z,
}

STANDARD_LABELS = ("exp", "inv_2_minus_z", "sin", "e2", "e5")


def builtin(label: str) -> AnalyticSeries:
    if label in _BUILTINS:
        return _BUILTINS[label]()
    m = re.fullmatch(r"e(\d+)", label)
    if m:
        return monomial(int(m.group(1)))
    raise KeyError(f"unknown built-in function {label!r}")


def standard_test_set() -> list[AnalyticSeries]:
    return [builtin(label) for label in STANDARD_LABELS]


def load_coefficient_file(path) -> AnalyticSeries:
    """Read ``{label, radius, coeffs: [[re, im], ...]}`` as a polynomial series."""
    doc = json.loads(Path(path).read_text())
    try:
        coeffs = [complex(re_, im_) for re_, im_ in doc["coeffs"]]
        return polynomial(str(doc["label"]), coeffs, float(doc.get("radius", math.inf)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: malformed coefficient file ({exc})") from exc


def resolve_function(spec: str) -> AnalyticSeries:
    """A built-in label, or a path to a coefficient file."""
    try:
        return builtin(spec)
    except KeyError:
        if Path(spec).is_file():
            return load_coefficient_file(spec)
        raise


# --------------------------------------------------------------------------
# Truncation

@dataclass(frozen=True)
class TruncationPolicy:
    tol: float = 1e-14
    max_terms: int = MAX_EXACT_P

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tail tolerance must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be positive")


def truncation_order(f: AnalyticSeries, r: float, policy: TruncationPolicy) -> tuple[int, float]:
    """Cutoff P and its tail bound for evaluating f on ``|z| <= r``.

    Polynomials are cut at their degree.  Otherwise the smallest P meeting the
    tolerance is doubled, then clipped to ``max_terms``.
    """
    if f.degree is not None:
        if f.degree > policy.max_terms:
            raise TruncationError(f"{f.label}: degree {f.degree} exceeds max_terms")
        return f.degree, 0.0
    if r >= f.radius:
        raise DivergenceError(f"{f.label}: r={r} is not inside the radius {f.radius}")
    for P in range(policy.max_terms + 1):
        if f.tail_bound(P, r) < policy.tol:
            P_final = min(2 * P, policy.max_terms)
            f.check_decay(P_final)
            return P_final, f.tail_bound(P_final, r)
    raise TruncationError(
        f"{f.label}: tail below {policy.tol} not reached within {policy.max_terms} terms at r={r}"
    )
