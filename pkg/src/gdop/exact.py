"""Exact rational scalars and dense univariate polynomials.

Scalars in exact mode are :class:`fractions.Fraction`; complex mode stores
Python ``complex`` values.  A polynomial is immutable once built.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

import numpy as np

ExactScalar = Fraction

EXACT = "exact"
COMPLEX = "complex"

Scalar = Union[Fraction, complex]


class ModeMismatchError(TypeError):
    """Raised when polynomials of different scalar modes are combined."""


def as_exact(value) -> Fraction:
    """Coerce an integer, Fraction or ``"num/den"`` string to a Fraction.

    Floats are refused: exact tables must not depend on binary rounding.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not exact scalars")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(c in text for c in ".eE") and "/" not in text:
            raise ValueError(
                f"decimal value {value!r} is not accepted; write it as a ratio like '1/3'"
            )
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def binomial(a: int, b: int) -> Fraction:
    """C(a, b) as an exact scalar, zero when b < 0 or b > a."""
    if b < 0 or a < 0 or b > a:
        return Fraction(0)
    b = min(b, a - b)
    num = 1
    den = 1
    for j in range(1, b + 1):
        num *= a - b + j
        den *= j
    return Fraction(num // den)


class Poly:
    """Dense polynomial ``sum(coeffs[j] * z**j)``.

    Trailing zero coefficients are stripped on construction, so the zero
    polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("_coeffs", "_mode")

    def __init__(self, coeffs: Iterable = (), mode: str = EXACT):
        if mode == EXACT:
            cs = [as_exact(c) for c in coeffs]
        elif mode == COMPLEX:
            cs = [complex(c) for c in coeffs]
        else:
            raise ValueError(f"unknown polynomial mode {mode!r}")
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs = tuple(cs)
        self._mode = mode

    @classmethod
    def constant(cls, c, mode: str = EXACT) -> "Poly":
        return cls([c], mode)

    @classmethod
    def monomial(cls, k: int, c=1, mode: str = EXACT) -> "Poly":
        zero = 0 if mode == EXACT else 0j
        return cls([zero] * k + [c], mode)

    @classmethod
    def zero(cls, mode: str = EXACT) -> "Poly":
        return cls((), mode)

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def mode(self) -> str:
        return self._mode

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def coeff(self, j: int) -> Scalar:
        if 0 <= j < len(self._coeffs):
            return self._coeffs[j]
        return Fraction(0) if self._mode == EXACT else 0j

    def to_complex(self) -> "Poly":
        """Round each exact coefficient once to a complex double."""
        if self._mode == COMPLEX:
            return self
        return Poly([complex(float(c)) for c in self._coeffs], COMPLEX)

    def to_array(self, length: int | None = None) -> np.ndarray:
        """Coefficients as a complex128 array, zero-padded to ``length``."""
        n = len(self._coeffs) if length is None else length
        out = np.zeros(n, dtype=np.complex128)
        for j, c in enumerate(self._coeffs[:n]):
            out[j] = float(c) if self._mode == EXACT else c
        return out

    def _check(self, other: "Poly") -> None:
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other._mode != self._mode:
            raise ModeMismatchError(f"cannot combine {self._mode} and {other._mode} polynomials")

    def __add__(self, other: "Poly") -> "Poly":
        return poly_add(self, other)

    def __sub__(self, other: "Poly") -> "Poly":
        return poly_add(self, other.scale(-1))

    def __neg__(self) -> "Poly":
        return self.scale(-1)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Poly):
            return poly_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        if self._mode == EXACT:
            c = as_exact(c)
        return Poly([c * a for a in self._coeffs], self._mode)

    def derivative(self, times: int = 1) -> "Poly":
        p = self
        for _ in range(times):
            p = poly_derivative(p)
        return p

    def __call__(self, z):
        return poly_eval(self, z)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self._mode == other._mode and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._mode, self._coeffs))

    def __repr__(self) -> str:
        if not self._coeffs:
            return "Poly(0)"
        terms = []
        for j, c in enumerate(self._coeffs):
            if c == 0:
                continue
            terms.append(f"({c})" if j == 0 else f"({c})*z^{j}")
        return "Poly(" + " + ".join(terms) + ")"


def poly_add(a: Poly, b: Poly) -> Poly:
    a._check(b)
    n = max(len(a.coeffs), len(b.coeffs))
    return Poly([a.coeff(j) + b.coeff(j) for j in range(n)], a.mode)


def poly_mul(a: Poly, b: Poly) -> Poly:
    a._check(b)
    if a.is_zero() or b.is_zero():
        return Poly.zero(a.mode)
    zero = Fraction(0) if a.mode == EXACT else 0j
    out = [zero] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        if x == 0:
            continue
        for j, y in enumerate(b.coeffs):
            out[i + j] += x * y
    return Poly(out, a.mode)


def poly_derivative(a: Poly) -> Poly:
    return Poly([j * c for j, c in enumerate(a.coeffs)][1:], a.mode)


def poly_eval(a: Poly, z):
    """Horner evaluation.

    Exact polynomials evaluated at a rational point give an exact Fraction;
    any other point is evaluated in complex floating point.
    """
    if a.mode == EXACT and isinstance(z, (int, Fraction)) and not isinstance(z, bool):
        acc = Fraction(0)
        for c in reversed(a.coeffs):
            acc = acc * z + c
        return acc
    z = complex(z)
    acc = 0j
    for c in reversed(a.coeffs):
        acc = acc * z + (float(c) if a.mode == EXACT else c)
    return acc


def poly_sum(polys: Sequence[Poly], mode: str = EXACT) -> Poly:
    out = Poly.zero(mode)
    for p in polys:
        out = out + p
    return out


def one_minus_z(mode: str = EXACT) -> Poly:
    return Poly([1, -1], mode)
