"""Applying ``G_n^a`` to functions.

Two independent paths: the analytic path sums ``c_p G(e_p)`` with exact
moment tables, the quadrature path evaluates the defining sum with the
interior integrals done by Gauss-Legendre.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .basis import alpha_basis_values, bernstein_values
from .exact import as_exact
from .moments import moment_table
from .series import AnalyticSeries, TruncationPolicy, derivative_coefficients, truncation_order

DEFAULT_POLICY = TruncationPolicy()


class QuadratureError(RuntimeError):
    pass


class ContourResolutionError(RuntimeError):
    pass


@dataclass(frozen=True)
class DiskSpec:
    r: float
    R: float = math.inf
    grid_points: int = 720

    def __post_init__(self):
        if not 1 <= self.r < self.R:
            raise ValueError(f"need 1 <= r < R, got r={self.r}, R={self.R}")
        if self.grid_points < 1:
            raise ValueError("grid_points must be positive")

    def circle(self, M: int | None = None) -> np.ndarray:
        return circle_points(self.r, M or self.grid_points)


def circle_points(r: float, M: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(M) / M
    return r * np.exp(1j * theta)


def _points(z) -> tuple[np.ndarray, bool]:
    arr = np.asarray(z, dtype=np.complex128)
    return np.atleast_1d(arr).ravel(), arr.ndim == 0


def _check_in_disk(zs: np.ndarray, disk: DiskSpec | None) -> float:
    rmax = float(np.max(np.abs(zs))) if zs.size else 0.0
    if disk is None:
        return max(1.0, rmax)
    if rmax > disk.r * (1 + 1e-12):
        raise ValueError(f"point with |z|={rmax} lies outside the disk of radius {disk.r}")
    return disk.r


def image_coefficients(f: AnalyticSeries, n: int, alpha, P: int) -> np.ndarray:
    """Coefficients of the truncated image ``sum_{p<=P} c_p G_n(e_p)``."""
    table = moment_table(n, as_exact(alpha), P)
    return f.coeffs(P) @ table.matrix()


def error_coefficients(f: AnalyticSeries, n: int, alpha, P: int) -> np.ndarray:
    """Coefficients of ``sum_{p<=P} c_p (G_n(e_p) - e_p)``."""
    table = moment_table(n, as_exact(alpha), P)
    return f.coeffs(P) @ table.error_matrix()


def apply_analytic(
    f: AnalyticSeries,
    n: int,
    alpha,
    z,
    disk: DiskSpec | None = None,
    trunc: TruncationPolicy = DEFAULT_POLICY,
    return_bound: bool = False,
):
    """``G_n^a(f; z)`` by term-wise application to the Taylor series.

    With ``return_bound=True`` also returns the a-priori truncation bound;
    since ``|G(e_p; z)| <= r^p`` the same tail controls the image.
    """
    zs, scalar = _points(z)
    r = _check_in_disk(zs, disk)
    P, tail = truncation_order(f, r, trunc)
    vals = _kernels.horner(image_coefficients(f, n, alpha, P), zs)
    out = vals[0] if scalar else vals.reshape(np.shape(z))
    return (out, tail) if return_bound else out


def operator_derivative(
    f: AnalyticSeries,
    n: int,
    alpha,
    l: int,
    z,
    disk: DiskSpec | None = None,
    trunc: TruncationPolicy = DEFAULT_POLICY,
):
    """l-th derivative of ``G_n^a(f)`` by exact differentiation of the images."""
    if l < 1:
        raise ValueError("derivative order l must be >= 1")
    zs, scalar = _points(z)
    r = _check_in_disk(zs, disk)
    P, _ = truncation_order(f, r, trunc)
    coeffs = derivative_coefficients(image_coefficients(f, n, alpha, P), l)
    vals = _kernels.horner(coeffs, zs)
    return vals[0] if scalar else vals.reshape(np.shape(z))


def contour_derivative(
    f: AnalyticSeries,
    n: int,
    alpha,
    l: int,
    z,
    r1: float,
    nodes: int = 256,
    trunc: TruncationPolicy = DEFAULT_POLICY,
    tol: float = 1e-12,
):
    """``l!/(2 pi i)`` times the integral of ``G(f; mu) / (mu - z)^(l+1)`` over ``|mu| = r1``.

    Trapezoidal rule on ``nodes`` points, checked against ``2 * nodes``.
    """
    zs, scalar = _points(z)
    if l < 0:
        raise ValueError("l must be >= 0")
    if not r1 < f.radius:
        raise ValueError(f"contour radius {r1} must lie inside the radius {f.radius}")
    if zs.size and np.max(np.abs(zs)) >= r1:
        raise ValueError("evaluation points must lie strictly inside the contour")
    P, _ = truncation_order(f, r1, trunc)
    g = image_coefficients(f, n, alpha, P)

    def rule(N):
        mu = circle_points(r1, N)
        gm = _kernels.horner(g, mu)
        w = gm * mu
        return math.factorial(l) * np.mean(w[None, :] / (mu[None, :] - zs[:, None]) ** (l + 1), axis=1)

    coarse = rule(nodes)
    fine = rule(2 * nodes)
    scale = max(1.0, float(np.max(np.abs(fine))) if fine.size else 1.0)
    if fine.size and np.max(np.abs(fine - coarse)) > tol * scale:
        raise ContourResolutionError(
            f"trapezoidal rule with {nodes} nodes is unresolved "
            f"(difference {np.max(np.abs(fine - coarse)):.3e})"
        )
    return fine[0] if scalar else fine.reshape(np.shape(z))


# --------------------------------------------------------------------------
# Quadrature path

def _legendre_with_derivative(m: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p0 = np.ones_like(x)
    p1 = x.copy()
    for j in range(2, m + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    return p1, m * (x * p1 - p0) / (x * x - 1.0)


@lru_cache(maxsize=64)
def gauss_legendre_01(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [0, 1].

    numpy's nodes lose a few digits around m = 128; two Newton steps on the
    three-term recurrence restore full accuracy.
    """
    x, _ = np.polynomial.legendre.leggauss(m)
    if m > 1:
        for _ in range(2):
            p, dp = _legendre_with_derivative(m, x)
            x = x - p / dp
        _, dp = _legendre_with_derivative(m, x)
        w = 2.0 / ((1.0 - x * x) * dp * dp)
    else:
        w = np.array([2.0])
    t, wt = 0.5 * (x + 1.0), 0.5 * w
    t.setflags(write=False)
    wt.setflags(write=False)
    return t, wt


def interior_functionals(f, n: int, m: int) -> np.ndarray:
    """``(n-1) int_0^1 p_{n-2,k-1}(t) f(t) dt`` for k = 1..n-1 with m nodes."""
    t, w = gauss_legendre_01(m)
    ft = np.asarray(f(t), dtype=np.complex128)
    B = bernstein_values(n - 2, t)
    return (n - 1) * ((w * ft) @ B)


def apply_quadrature(
    f,
    f_at_0: complex,
    f_at_1: complex,
    n: int,
    alpha,
    z,
    quad_tol: float = 1e-13,
    degree: int | None = None,
):
    """``G_n^a(f; z)`` from the defining sum.

    ``f`` is a vectorised callable on real points of [0, 1].  With a declared
    polynomial ``degree`` the Gauss rule is exact; otherwise a base rule is
    compared with one of twice the size and must agree to ``quad_tol``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a = Fraction(as_exact(alpha))
    zs, scalar = _points(z)
    L = np.zeros(n + 1, dtype=np.complex128)
    L[0] = f_at_0
    L[n] = f_at_1
    if n >= 2:
        if degree is not None:
            L[1:n] = interior_functionals(f, n, math.ceil((n + degree) / 2) + 2)
        else:
            m = max(64, n)
            base = interior_functionals(f, n, m)
            refined = interior_functionals(f, n, 2 * m)
            err = float(np.max(np.abs(refined - base)))
            if err > quad_tol * max(1.0, float(np.max(np.abs(refined)))):
                raise QuadratureError(f"Gauss-Legendre {m} vs {2 * m} nodes differ by {err:.3e}")
            L[1:n] = refined
    vals = alpha_basis_values(n, a, zs) @ L
    return vals[0] if scalar else vals.reshape(np.shape(z))
