"""Independent exact references used by several test modules.

Nothing here calls the closed form or the recurrence; interior integrals are
done by integrating polynomial coefficients term by term.
"""

from fractions import Fraction
from math import comb

from gdop.exact import Poly


def integrate_01(p: Poly) -> Fraction:
    return sum((Fraction(c) / (j + 1) for j, c in enumerate(p.coeffs)), Fraction(0))


def bernstein(n: int, k: int) -> Poly:
    if not 0 <= k <= n:
        return Poly.zero()
    out = Poly([comb(n, k)])
    for _ in range(k):
        out = out * Poly([0, 1])
    for _ in range(n - k):
        out = out * Poly([1, -1])
    return out


def basis(n: int, k: int, a: Fraction) -> Poly:
    if n == 1:
        return Poly([1, -1]) if k == 0 else Poly([0, 1])
    return (
        bernstein(n - 2, k) * Poly([1, -1]) * (1 - a)
        + bernstein(n - 2, k - 2) * Poly([0, 1]) * (1 - a)
        + bernstein(n, k) * a
    )


def operator_on_poly(f: Poly, n: int, a: Fraction) -> Poly:
    """The defining sum applied to a polynomial, with exact symbolic integrals."""
    a = Fraction(a)
    out = basis(n, 0, a) * f(Fraction(0)) + basis(n, n, a) * f(Fraction(1))
    for k in range(1, n):
        w = (n - 1) * integrate_01(bernstein(n - 2, k - 1) * f)
        out = out + basis(n, k, a) * w
    return out


def monomial(p: int) -> Poly:
    return Poly.monomial(p)


def e2_image(n: int, a: Fraction) -> Poly:
    """``z^2 + 2 z (1-z) / (n+1) * (1 + (1-a)/n)``."""
    return Poly([0, 0, 1]) + Poly([0, 1, -1]) * (Fraction(2, n + 1) * (1 + (1 - Fraction(a)) / n))
