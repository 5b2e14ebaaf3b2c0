"""Measured convergence of ``G_n^a f`` on circles and checks against explicit bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels
from .exact import as_exact
from .operator import (
    DEFAULT_POLICY,
    DiskSpec,
    circle_points,
    contour_derivative,
    error_coefficients,
    operator_derivative,
)
from .series import (
    AnalyticSeries,
    DivergenceError,
    TruncationPolicy,
    derivative_coefficients,
    truncation_order,
)

# relative slack allowed for float rounding in hard bound checks
BOUND_RTOL = 1e-10
SAMPLING_RTOL = 5e-3


class BoundViolation(AssertionError):
    def __init__(self, message: str, n: int | None = None, z: complex | None = None):
        super().__init__(message)
        self.n = n
        self.z = z


class DegenerateInputError(ValueError):
    """The convergence order is undefined (zero errors, or a hypothesis fails)."""


class SamplingError(RuntimeError):
    """Circle sampling at M and 2M points disagrees on the supremum."""


# --------------------------------------------------------------------------
# Sup norms

def sup_norm_on_circle(g: Callable[[np.ndarray], np.ndarray], r: float, M: int = 720) -> float:
    """Max of ``|g|`` over M equispaced points on ``|z| = r``."""
    if M < 8:
        raise ValueError("need at least 8 sample points")
    return float(np.max(np.abs(g(circle_points(r, M)))))


def sup_norm_refined(g, r: float, M: int = 720) -> tuple[float, float]:
    """Sup over M and over 2M points; the second is never smaller."""
    return sup_norm_on_circle(g, r, M), sup_norm_on_circle(g, r, 2 * M)


def _poly_sup(coeffs: np.ndarray, r: float, M: int, check: bool = True) -> tuple[float, np.ndarray, np.ndarray]:
    zs = circle_points(r, 2 * M)
    vals = np.abs(_kernels.horner(coeffs, zs))
    coarse = float(np.max(vals[::2]))
    fine = float(np.max(vals))
    if check and fine > 0 and (fine - coarse) > SAMPLING_RTOL * fine:
        raise SamplingError(f"sup on {M} vs {2 * M} points: {coarse:.6e} vs {fine:.6e}")
    return fine, zs, vals


# --------------------------------------------------------------------------
# Constants

def upper_bound_constant(
    f: AnalyticSeries, r: float, trunc: TruncationPolicy = DEFAULT_POLICY, max_terms: int = 20000
) -> float:
    """``2 sum_{p>=2} |c_p| p (p-1) r^p``.

    Summed until a term falls below ``trunc.tol`` with the ratio of
    consecutive terms settled below one; the geometric remainder implied by
    that ratio is added.
    """
    if not r < f.radius:
        raise DivergenceError(f"{f.label}: r={r} not inside radius {f.radius}")
    if f.degree is not None:
        return float(
            sum(2 * abs(f.coefficient(p)) * p * (p - 1) * r**p for p in range(2, f.degree + 1))
        )
    total = 0.0
    prev = None
    for p in range(2, max_terms):
        c = abs(f.coefficient(p))
        term = 2.0 * c * p * (p - 1) * math.exp(p * math.log(r)) if c else 0.0
        total += term
        if term and prev:
            q = term / prev
            if term < trunc.tol * max(total, 1.0) and q < 1:
                return total + term * q / (1 - q)
        if term:
            prev = term
    raise DivergenceError(f"{f.label}: weighted coefficient series did not settle at r={r}")


def simultaneous_bound(f: AnalyticSeries, n: int, l: int, r: float, r1: float, trunc=DEFAULT_POLICY) -> float:
    """Cauchy-estimate bound ``C_{r1}(f) l! r1 / (n (r1 - r)^(l+1))``."""
    return upper_bound_constant(f, r1, trunc) * math.factorial(l) * r1 / (n * (r1 - r) ** (l + 1))


# --------------------------------------------------------------------------
# Records

@dataclass(frozen=True)
class ConvergenceRecord:
    n: int
    alpha: Fraction
    r: float
    f_label: str
    sup_error: float
    bound: float
    voronovskaja_residual: float
    derivative_errors: dict = field(default_factory=dict)
    derivative_bounds: dict = field(default_factory=dict)
    argmax: complex = 0j

    @property
    def bound_ratio(self) -> float:
        """``sup_error * n / C_r(f)``; at most one when the bound holds."""
        c = self.bound * self.n
        return self.sup_error * self.n / c if c else 0.0

    def check(self) -> None:
        if self.sup_error > self.bound * (1 + BOUND_RTOL):
            raise BoundViolation(
                f"{self.f_label} n={self.n} alpha={self.alpha}: sup error {self.sup_error!r} "
                f"exceeds C_r/n = {self.bound!r} at z={self.argmax}",
                self.n,
                self.argmax,
            )
        for l, err in self.derivative_errors.items():
            b = self.derivative_bounds.get(l)
            if b is not None and err > b * (1 + BOUND_RTOL):
                raise BoundViolation(
                    f"{self.f_label} n={self.n} alpha={self.alpha} l={l}: derivative error "
                    f"{err!r} exceeds {b!r}",
                    self.n,
                )


def _fzz_coeffs(f: AnalyticSeries, P: int) -> np.ndarray:
    """Coefficients of ``z (1 - z) f''(z)`` from the series truncated at P."""
    f2 = derivative_coefficients(f.coeffs(P), 2)
    out = np.zeros(len(f2) + 2, dtype=np.complex128)
    out[1:-1] += f2
    out[2:] -= f2
    return out


def _pad_sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    m = max(len(a), len(b))
    out = np.zeros(m, dtype=np.complex128)
    out[: len(a)] += a
    out[: len(b)] -= b
    return out


def measure(
    f: AnalyticSeries,
    n: int,
    alpha,
    disk: DiskSpec,
    trunc: TruncationPolicy = DEFAULT_POLICY,
    l_values: Iterable[int] = (),
    r1: float | None = None,
) -> ConvergenceRecord:
    """All circle measurements for one (f, n, alpha); no assertion is made."""
    a = as_exact(alpha)
    r, M = disk.r, disk.grid_points
    P, _ = truncation_order(f, r, trunc)
    err = error_coefficients(f, n, a, P)
    sup_err, zs, vals = _poly_sup(err, r, M)
    bound = upper_bound_constant(f, r, trunc) / n
    resid = _poly_sup(_pad_sub(n * err, _fzz_coeffs(f, P)), r, M, check=False)[0]
    derr, dbound = {}, {}
    for l in l_values:
        if r1 is None:
            raise ValueError("derivative measurements need r1")
        derr[l] = _poly_sup(derivative_coefficients(err, l), r, M, check=False)[0]
        dbound[l] = simultaneous_bound(f, n, l, r, r1, trunc)
    return ConvergenceRecord(
        n, a, r, f.label, sup_err, bound, resid, derr, dbound, complex(zs[int(np.argmax(vals))])
    )


def verify_upper_bound(
    f: AnalyticSeries,
    n_list: Sequence[int],
    alpha,
    disk: DiskSpec,
    trunc: TruncationPolicy = DEFAULT_POLICY,
) -> list[ConvergenceRecord]:
    """One record per n; raises :class:`BoundViolation` if ``sup_error > C_r(f)/n``."""
    records = []
    for n in n_list:
        if n < 2:
            raise ValueError("verify_upper_bound needs n >= 2")
        rec = measure(f, n, alpha, disk, trunc)
        rec.check()
        records.append(rec)
    return records


def voronovskaja_residual(
    f: AnalyticSeries,
    n: int,
    alpha,
    disk: DiskSpec,
    trunc: TruncationPolicy = DEFAULT_POLICY,
) -> float:
    """Sup over the circle of ``|n (G_n f - f) - z (1-z) f''|``.

    Also checks, at every sampled point, the boundedness estimate
    ``|n (G_n f - f) - (n+1-a)/(n+1) z(1-z) f''| <= C_r(f) + r (1+r) ||f''||_r``.
    """
    if n < 2:
        raise ValueError("voronovskaja_residual needs n >= 2")
    a = as_exact(alpha)
    r, M = disk.r, disk.grid_points
    P, _ = truncation_order(f, r, trunc)
    err = n * error_coefficients(f, n, a, P)
    fzz = _fzz_coeffs(f, P)
    zs = circle_points(r, 2 * M)
    resid = float(np.max(np.abs(_kernels.horner(_pad_sub(err, fzz), zs))))

    weight = float(Fraction(n + 1) - a) / (n + 1)
    shifted = np.abs(_kernels.horner(_pad_sub(err, weight * fzz), zs))
    f2_sup = float(np.max(np.abs(_kernels.horner(derivative_coefficients(f.coeffs(P), 2), zs))))
    limit = upper_bound_constant(f, r, trunc) + r * (1 + r) * f2_sup
    worst = int(np.argmax(shifted))
    if shifted[worst] > limit * (1 + BOUND_RTOL):
        raise BoundViolation(
            f"{f.label} n={n}: Voronovskaja boundedness {shifted[worst]!r} > {limit!r}",
            n,
            complex(zs[worst]),
        )
    return resid


# --------------------------------------------------------------------------
# Order estimates

@dataclass(frozen=True)
class OrderEstimate:
    slope: float
    slope_ci: tuple[float, float]
    n_range: tuple[int, int]
    n_values: tuple[int, ...] = ()
    errors: tuple[float, ...] = ()


def fit_order(n_values: Sequence[int], errors: Sequence[float]) -> OrderEstimate:
    """Least-squares slope of log(error) against log(n)."""
    ns = np.asarray(n_values, dtype=float)
    es = np.asarray(errors, dtype=float)
    if len(set(n_values)) < 4:
        raise ValueError("order estimate needs at least 4 distinct n values")
    if np.any(es <= 0) or not np.all(np.isfinite(es)):
        raise DegenerateInputError("errors must be positive; is f a polynomial of degree <= 1?")
    x, y = np.log(ns), np.log(es)
    slope, icept = np.polyfit(x, y, 1)
    half = float(np.max(np.abs(y - (slope * x + icept))))
    return OrderEstimate(
        float(slope),
        (float(slope) - half, float(slope) + half),
        (int(ns.min()), int(ns.max())),
        tuple(int(v) for v in n_values),
        tuple(float(e) for e in errors),
    )


def estimate_order(records: Sequence[ConvergenceRecord]) -> OrderEstimate:
    return fit_order([rec.n for rec in records], [rec.sup_error for rec in records])


def verify_simultaneous(
    f: AnalyticSeries,
    l: int,
    n_list: Sequence[int],
    alpha,
    r: float,
    r1: float,
    trunc: TruncationPolicy = DEFAULT_POLICY,
    M: int = 720,
    spot_checks: int = 3,
    spot_tol: float = 1e-8,
    seed: int = 0,
) -> OrderEstimate:
    """Derivative sup errors against the Cauchy bound, plus a slope fit.

    At ``spot_checks`` random points per n the exact derivative is compared
    with the contour-integral derivative.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    if not 1 <= r < r1 < f.radius:
        raise ValueError(f"need 1 <= r < r1 < R, got r={r}, r1={r1}, R={f.radius}")
    if f.is_polynomial_of_degree_at_most(max(1, l - 1)):
        raise DegenerateInputError(
            f"{f.label} is a polynomial of degree <= {max(1, l - 1)}; the order is undefined"
        )
    a = as_exact(alpha)
    disk = DiskSpec(r, f.radius, M)
    rng = np.random.default_rng(seed)
    errors = []
    for n in n_list:
        rec = measure(f, n, a, disk, trunc, l_values=(l,), r1=r1)
        rec.check()
        errors.append(rec.derivative_errors[l])
        rho = r * np.sqrt(rng.uniform(size=spot_checks))
        zs = rho * np.exp(2j * np.pi * rng.uniform(size=spot_checks))
        exact = operator_derivative(f, n, a, l, zs, disk, trunc)
        contour = contour_derivative(f, n, a, l, zs, r1, trunc=trunc)
        gap = np.abs(exact - contour)
        if np.any(gap > spot_tol * np.maximum(1.0, np.abs(exact))):
            i = int(np.argmax(gap))
            raise BoundViolation(
                f"{f.label} n={n} l={l}: exact vs contour derivative differ by {gap[i]:.3e} at z={zs[i]}",
                n,
                complex(zs[i]),
            )
    return fit_order(list(n_list), errors)
