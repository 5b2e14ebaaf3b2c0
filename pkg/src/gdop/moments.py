"""Exact monomial images ``G_n^a(e_p; z)`` by two independent routes.

* :func:`monomial_image_recurrence` advances the three partial sums
  ``S_1, S_2, S_3`` with their first-order differential recurrences and
  assembles ``G(e_{p+1})`` from ``G(e_p)`` and ``S_1, S_2``.
* :func:`monomial_image_closed` builds every image from forward differences
  of the rising factorials ``E_p(k) = k (k+1) ... (k+p-1)``.

A third, brute-force route (:func:`monomial_image_direct`) expands the
defining sum with exact Beta integrals and is used as an oracle.

About the partial sums: the operator is ``sum_k q_{n,k}(z) L_k(f)`` where
``L_0 = f(0)``, ``L_n = f(1)`` and ``L_k = (n-1) int p_{n-2,k-1} f`` in
between.  Splitting ``q_{n,k}`` into its three parts gives ``S_1, S_2, S_3``.
Only when the endpoint functionals are kept (``endpoints=True``) do the
three sums add up to the operator image; dropping them reproduces the
integral-only sums, which differ by ``(1-a)(1-z)^(n-1)`` in ``S_1`` at p = 0
and by ``(1-a) z^(n-1)`` in ``S_2`` at every p.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from pathlib import Path
from typing import Sequence

import numpy as np

from .basis import alpha_basis_parts, alpha_basis_poly
from .exact import Poly, as_exact, binomial

# Exact tables stay cheap well past these sizes because every coefficient is
# a ratio of integers; the caps only guard against runaway requests.
MAX_EXACT_N = 1024
MAX_EXACT_P = 128

RECURRENCE = "recurrence"
CLOSED_FORM = "closed_form"
DIRECT = "direct"

Z = Poly([0, 1])
ONE = Poly([1])
Z_ONE_MINUS_Z = Poly([0, 1, -1])


class CapExceededError(ValueError):
    """Requested exact table is beyond the exact-arithmetic caps."""


def check_caps(n: int, P: int) -> None:
    if n > MAX_EXACT_N:
        raise CapExceededError(f"n={n} exceeds exact-mode cap {MAX_EXACT_N}")
    if P > MAX_EXACT_P:
        raise CapExceededError(f"P={P} exceeds exact-mode cap {MAX_EXACT_P}")


# --------------------------------------------------------------------------
# Beta integrals and rising factorials

def beta_function(a: int, b: int) -> Fraction:
    """Exact ``B(a, b) = (a-1)! (b-1)! / (a+b-1)!`` for positive integers."""
    if a < 1 or b < 1:
        raise ValueError(f"Beta arguments must be positive integers, got ({a}, {b})")
    return Fraction(factorial(a - 1) * factorial(b - 1), factorial(a + b - 1))


def beta_step_identity_check(p: int, q: int) -> bool:
    """Whether ``p B(p, q) == (p + q) B(p + 1, q)`` holds exactly."""
    if p < 1 or q < 1:
        raise ValueError("p and q must be >= 1")
    return p * beta_function(p, q) == (p + q) * beta_function(p + 1, q)


def beta_moment(n: int, k: int, p: int) -> Fraction:
    """``int_0^1 p_{n-2,k-1}(t) t^p dt = C(n-2, k-1) B(k+p, n-k)``."""
    if n < 2:
        raise ValueError(f"beta_moment needs n >= 2, got {n}")
    if not 1 <= k <= n - 1:
        raise ValueError(f"beta_moment index k={k} outside [1, {n - 1}]")
    if p < 0:
        raise ValueError("p must be >= 0")
    return binomial(n - 2, k - 1) * beta_function(k + p, n - k)


def rising_factorial(k: int, p: int) -> int:
    """``E_p(k) = prod_{j=0}^{p-1} (k + j)``; the empty product is 1."""
    out = 1
    for j in range(p):
        out *= k + j
    return out


def forward_difference_at_zero(values: Sequence, s: int):
    """``sum_{k=0}^{s} (-1)^k C(s,k) g(s-k)`` for ``g(j) = values[j]``."""
    total = 0
    for k in range(s + 1):
        term = comb(s, k) * values[s - k]
        total = total - term if k % 2 else total + term
    return total


@lru_cache(maxsize=None)
def _e_table(p: int) -> tuple[int, ...]:
    return tuple(rising_factorial(k, p) for k in range(p + 2))


@lru_cache(maxsize=None)
def _e_differences(p: int) -> tuple[int, ...]:
    e = _e_table(p)
    return tuple(forward_difference_at_zero(e, s) for s in range(p + 1))


@lru_cache(maxsize=None)
def _scaled_f_table(n: int, p: int) -> tuple[int, ...]:
    # (n-1) * F_p(k), an integer
    e = _e_table(p)
    return tuple((n - 1 - k) * e[k] + k * e[k + 1] for k in range(p + 1))


@lru_cache(maxsize=None)
def _f_differences(n: int, p: int) -> tuple[Fraction, ...]:
    f = _scaled_f_table(n, p)
    return tuple(Fraction(forward_difference_at_zero(f, s), n - 1) for s in range(p + 1))


@dataclass(frozen=True)
class FactorialMoments:
    """Rising factorials, their shifted blends and forward differences at 0.

    ``E[p][k]`` for k = 0..P+1, ``F[p][k]`` for k = 0..P, and
    ``dE[p][s]``, ``dF[p][s]`` for s = 0..p.
    """

    n: int
    P: int
    E: tuple
    F: tuple
    dE: tuple
    dF: tuple


def factorial_moments(n: int, P: int) -> FactorialMoments:
    if n < 2:
        raise ValueError("factorial moments need n >= 2")
    check_caps(n, P)
    E, F, dE, dF = [], [], [], []
    for p in range(P + 1):
        E.append(tuple(rising_factorial(k, p) for k in range(P + 2)))
        F.append(
            tuple(
                (1 - Fraction(k, n - 1)) * E[p][k] + Fraction(k, n - 1) * E[p][k + 1]
                for k in range(P + 1)
            )
        )
        dE.append(tuple(Fraction(v) for v in _e_differences(p)))
        dF.append(_f_differences(n, p))
    return FactorialMoments(n, P, tuple(E), tuple(F), tuple(dE), tuple(dF))


# --------------------------------------------------------------------------
# Moment tables

@dataclass(frozen=True)
class MomentTable:
    n: int
    alpha: Fraction
    images: tuple[Poly, ...]
    method: str
    _float_cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def P(self) -> int:
        return len(self.images) - 1

    def matrix(self) -> np.ndarray:
        """Row p holds the complex-float coefficients of ``G(e_p)``."""
        if "matrix" not in self._float_cache:
            m = np.zeros((self.P + 1, self.P + 1), dtype=np.complex128)
            for p, img in enumerate(self.images):
                m[p, : len(img.coeffs)] = img.to_array()
            m.setflags(write=False)
            self._float_cache["matrix"] = m
        return self._float_cache["matrix"]

    def error_matrix(self) -> np.ndarray:
        """Row p holds the coefficients of ``G(e_p) - e_p``, subtracted exactly."""
        if "error" not in self._float_cache:
            m = np.zeros((self.P + 1, self.P + 1), dtype=np.complex128)
            for p, img in enumerate(self.images):
                diff = img - Poly.monomial(p)
                m[p, : len(diff.coeffs)] = diff.to_array()
            m.setflags(write=False)
            self._float_cache["error"] = m
        return self._float_cache["error"]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "alpha": _ratio(self.alpha),
            "method": self.method,
            "images": [[_ratio(c) for c in img.coeffs] or ["0"] for img in self.images],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "MomentTable":
        images = tuple(Poly([Fraction(c) for c in row]) for row in doc["images"])
        return cls(int(doc["n"]), Fraction(doc["alpha"]), images, doc.get("method", CLOSED_FORM))


def _ratio(x: Fraction) -> str:
    return str(Fraction(x))


def write_moment_table(table: MomentTable, path) -> None:
    Path(path).write_text(json.dumps(table.to_json(), indent=2) + "\n")


def read_moment_table(path) -> MomentTable:
    return MomentTable.from_json(json.loads(Path(path).read_text()))


# --------------------------------------------------------------------------
# Route 1: brute-force defining sum

def genuine_weights(n: int, p: int) -> list[Fraction]:
    """``L_k(e_p)`` for k = 0..n: point values at the ends, Beta integrals inside."""
    w = [Fraction(1 if p == 0 else 0)]
    w += [(n - 1) * beta_moment(n, k, p) for k in range(1, n)]
    w.append(Fraction(1))
    return w


def monomial_image_direct(n: int, alpha, p: int) -> Poly:
    """``q_{n,0} e_p(0) + q_{n,n} e_p(1) + (n-1) sum q_{n,k} int p_{n-2,k-1} t^p``."""
    a = as_exact(alpha)
    if n == 1:
        return ONE if p == 0 else Z
    out = Poly.zero()
    for k, wk in enumerate(genuine_weights(n, p)):
        if wk:
            out = out + alpha_basis_poly(n, k, a) * wk
    return out


# --------------------------------------------------------------------------
# Route 2: recurrence through the partial sums

@dataclass(frozen=True)
class AuxTriple:
    s1: Poly
    s2: Poly
    s3: Poly
    p: int = 0

    def total(self) -> Poly:
        return self.s1 + self.s2 + self.s3


def aux_sums(n: int, alpha, p: int, endpoints: bool = True) -> AuxTriple:
    """``S_1, S_2, S_3`` at exponent p by direct summation.

    With ``endpoints=False`` only the interior Beta-integral terms are kept,
    which is the literal integral form of the sums.
    """
    if n < 2:
        raise ValueError("partial sums need n >= 2")
    a = as_exact(alpha)
    w = genuine_weights(n, p)
    if not endpoints:
        w[0] = w[-1] = Fraction(0)
    sums = [Poly.zero(), Poly.zero(), Poly.zero()]
    for k, wk in enumerate(w):
        if not wk:
            continue
        for i, part in enumerate(alpha_basis_parts(n, k, a)):
            sums[i] = sums[i] + part * wk
    return AuxTriple(*sums, p=p)


def aux_initial(n: int, alpha) -> AuxTriple:
    """The p = 0 triple, summed directly with the endpoint functionals included."""
    if n < 2:
        raise ValueError(f"aux_initial needs n >= 2, got {n}")
    return aux_sums(n, alpha, 0, endpoints=True)


def aux_initial_residual(n: int, alpha) -> Poly:
    """``S_1(e_0)`` with endpoints minus the integral-only sum: ``(1-a)(1-z)^(n-1)``."""
    full = aux_sums(n, alpha, 0, endpoints=True)
    literal = aux_sums(n, alpha, 0, endpoints=False)
    return full.s1 - literal.s1


def aux_advance(t: AuxTriple, n: int, p: int | None = None) -> AuxTriple:
    """Move the triple from exponent p to p + 1."""
    p = t.p if p is None else p
    d = Fraction(1, n + p)
    s1 = (Z_ONE_MINUS_Z * t.s1.derivative() + Poly([p, n - 1]) * t.s1) * d
    s2 = (Z_ONE_MINUS_Z * t.s2.derivative() + Poly([p + 1, n - 1]) * t.s2) * d
    s3 = (Z_ONE_MINUS_Z * t.s3.derivative() + Poly([p, n]) * t.s3) * d
    return AuxTriple(s1, s2, s3, p=p + 1)


def recurrence_step(g: Poly, t: AuxTriple, n: int, p: int) -> Poly:
    """``G(e_{p+1})`` from ``G(e_p)`` and the partial sums at p."""
    d = Fraction(1, n + p)
    return (
        Z_ONE_MINUS_Z * g.derivative()
        + Poly([p, n]) * g
        - Z * t.s1
        + Poly([1, -1]) * t.s2
    ) * d


def monomial_image_recurrence(n: int, alpha, P: int, seed: AuxTriple | None = None) -> MomentTable:
    """Images p = 0..P from the moment recurrence.

    ``seed`` overrides the p = 0 partial sums (used to show that the
    integral-only sums do not reproduce the operator).
    """
    if n < 2:
        raise ValueError(f"recurrence needs n >= 2, got {n}")
    if P < 0:
        raise ValueError("P must be >= 0")
    check_caps(n, P)
    a = as_exact(alpha)
    t = aux_initial(n, a) if seed is None else seed
    images = [ONE]
    g = ONE
    for p in range(P):
        g = recurrence_step(g, t, n, p)
        images.append(g)
        t = aux_advance(t, n, p)
    return MomentTable(n, a, tuple(images), RECURRENCE)


# --------------------------------------------------------------------------
# Route 3: closed form from forward differences

@lru_cache(maxsize=None)
def _closed_parts(n: int, p: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    # coefficient of z^s is A[s] + alpha * (B[s] - A[s])
    scale = Fraction(factorial(n - 1), factorial(n - 1 + p))
    dE = _e_differences(p)
    dF = _f_differences(n, p)
    A = tuple(scale * binomial(n - 1, s) * dF[s] for s in range(min(n - 1, p) + 1))
    B = tuple(scale * binomial(n, s) * dE[s] for s in range(min(n, p) + 1))
    return A, B


def closed_form_image(n: int, alpha, p: int) -> Poly:
    a = as_exact(alpha)
    A, B = _closed_parts(n, p)
    m = max(len(A), len(B))
    A = A + (Fraction(0),) * (m - len(A))
    B = B + (Fraction(0),) * (m - len(B))
    return Poly([(1 - a) * x + a * y for x, y in zip(A, B)])


def monomial_image_closed(n: int, alpha, P: int) -> MomentTable:
    """Images p = 0..P from the forward-difference closed form.

    ``n = 1`` is allowed here: the interior sum is empty and every
    ``G_1(e_p)`` with p >= 1 equals z.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if P < 0:
        raise ValueError("P must be >= 0")
    check_caps(n, P)
    a = as_exact(alpha)
    if n == 1:
        return MomentTable(1, a, (ONE,) + (Z,) * P, CLOSED_FORM)
    images = (ONE,) + tuple(closed_form_image(n, a, p) for p in range(1, P + 1))
    return MomentTable(n, a, images, CLOSED_FORM)


@lru_cache(maxsize=256)
def moment_table(n: int, alpha: Fraction, P: int) -> MomentTable:
    """Cached closed-form table; the default source for float evaluation."""
    return monomial_image_closed(n, alpha, P)


# --------------------------------------------------------------------------
# Leading coefficient of G(e_p)

def _check_lead(n: int, p: int) -> None:
    if not 2 <= p <= n:
        raise ValueError(f"leading coefficient needs 2 <= p <= n, got p={p}, n={n}")


def leading_coefficient(n: int, alpha, p: int) -> Fraction:
    """Coefficient of ``z^p`` in ``G(e_p)`` from the top forward differences."""
    _check_lead(n, p)
    a = as_exact(alpha)
    dF_top = _f_differences(n, p)[p]
    dE_top = Fraction(_e_differences(p)[p])
    return Fraction(factorial(n - 1), factorial(n - 1 + p)) * (
        (1 - a) * binomial(n - 1, p) * dF_top + a * binomial(n, p) * dE_top
    )


def _lead_factors(n: int, p: int) -> tuple[list[Fraction], list[Fraction]]:
    lo = [Fraction(n + j - 1 - p, n + j - 1) for j in range(1, p)]
    hi = [Fraction(n + j - p, n + j) for j in range(1, p)]
    return lo, hi


def leading_coefficient_product(n: int, alpha, p: int) -> Fraction:
    """``prod_{j=1}^{p-1} ((1-a)(n+j-1-p)/(n+j-1) + a (n+j-p)/(n+j))``.

    Agrees with :func:`leading_coefficient` for a in {0, 1} and for p = 2;
    for 0 < a < 1 and p >= 3 the two differ (see
    :func:`leading_coefficient_mixture`).
    """
    _check_lead(n, p)
    a = as_exact(alpha)
    out = Fraction(1)
    for x, y in zip(*_lead_factors(n, p)):
        out *= (1 - a) * x + a * y
    return out


def leading_coefficient_mixture(n: int, alpha, p: int) -> Fraction:
    """``(1-a) prod(lo_j) + a prod(hi_j)``, equal to the true leading coefficient."""
    _check_lead(n, p)
    a = as_exact(alpha)
    lo, hi = _lead_factors(n, p)
    plo = phi = Fraction(1)
    for x, y in zip(lo, hi):
        plo *= x
        phi *= y
    return (1 - a) * plo + a * phi
