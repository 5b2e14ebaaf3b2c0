"""Classical Bernstein basis ``p_{n,k}`` and the alpha-Bernstein basis ``q_{n,k}``.

The alpha basis for ``n >= 2`` is built from three Bernstein-type parts::

    q_{n,k} = (1-a) p_{n-2,k}(z) (1-z) + (1-a) p_{n-2,k-2}(z) z + a p_{n,k}(z)

which is the usual three-bracket formula with the factor
``z^{k-1} (1-z)^{n-k-1}`` distributed into each bracket, so no negative
power appears at ``k = 0`` or ``k = n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .exact import Poly, as_exact, binomial


@dataclass(frozen=True)
class BasisSpec:
    n: int
    alpha: Fraction
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"operator order must be >= 1, got n={self.n}")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"basis index k={self.k} outside [0, {self.n}]")
        object.__setattr__(self, "alpha", as_exact(self.alpha))

    @property
    def outside_unit_interval(self) -> bool:
        """True when alpha lies outside [0, 1], where positivity is lost."""
        return not 0 <= self.alpha <= 1


def bernstein_poly(n: int, k: int) -> Poly:
    """``C(n,k) t^k (1-t)^(n-k)`` expanded in monomials; zero for k out of range."""
    if n < 0 or k < 0 or k > n:
        return Poly.zero()
    c = binomial(n, k)
    coeffs = [Fraction(0)] * (n + 1)
    for j in range(n - k + 1):
        coeffs[k + j] = c * binomial(n - k, j) * (-1) ** j
    return Poly(coeffs)


def alpha_basis_parts(n: int, k: int, alpha) -> tuple[Poly, Poly, Poly]:
    """The three summands of ``q_{n,k}`` for ``n >= 2``.

    Returns ``((1-a) p_{n-2,k} (1-z), (1-a) p_{n-2,k-2} z, a p_{n,k})``.
    """
    if n < 2:
        raise ValueError("the three-part decomposition needs n >= 2")
    a = as_exact(alpha)
    part1 = bernstein_poly(n - 2, k) * Poly([1, -1]) * (1 - a)
    part2 = bernstein_poly(n - 2, k - 2) * Poly([0, 1]) * (1 - a)
    part3 = bernstein_poly(n, k) * a
    return part1, part2, part3


def alpha_basis_poly(n: int, k: int, alpha) -> Poly:
    spec = BasisSpec(n, alpha, k)
    if n == 1:
        return Poly([1, -1]) if k == 0 else Poly([0, 1])
    p1, p2, p3 = alpha_basis_parts(n, k, spec.alpha)
    return p1 + p2 + p3


def alpha_basis_polys(n: int, alpha) -> list[Poly]:
    return [alpha_basis_poly(n, k, alpha) for k in range(n + 1)]


def alpha_basis_values(n: int, alpha, z) -> np.ndarray:
    """Float evaluation of ``q_{n,0..n}`` at the points ``z``.

    Returns an array of shape ``(len(z), n + 1)``.  Terms are formed in polar
    form from exact log-binomials, so large ``n`` does not overflow.
    """
    zs = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    a = float(alpha)
    if n == 1:
        return np.stack([1.0 - zs, zs], axis=1)
    return _kernels.alpha_basis_grid(
        n, a, zs, _kernels.log_binomial_row(n), _kernels.log_binomial_row(n - 2)
    )


def bernstein_values(n: int, t) -> np.ndarray:
    """Float evaluation of ``p_{n,0..n}`` at real points ``t``; shape ``(len(t), n+1)``."""
    ts = np.atleast_1d(np.asarray(t, dtype=np.float64))
    return _kernels.bernstein_grid(n, ts, _kernels.log_binomial_row(n))
