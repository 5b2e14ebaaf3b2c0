"""Self-verification suite driven by ``gdop verify``."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .analysis import BoundViolation, verify_simultaneous, verify_upper_bound
from .basis import alpha_basis_polys, bernstein_poly
from .exact import Poly
from .moments import (
    Z_ONE_MINUS_Z,
    monomial_image_closed,
    monomial_image_direct,
    monomial_image_recurrence,
)
from .operator import DiskSpec, apply_analytic, apply_quadrature, circle_points
from .series import exp_series, standard_test_set

log = logging.getLogger(__name__)

# Test-only hook: (n, alpha, p) whose closed-form image gets perturbed.
FAULT_INJECTION: tuple[int, Fraction, int] | None = None


class VerificationFailure(AssertionError):
    pass


@dataclass(frozen=True)
class Level:
    name: str
    n_max: int
    p_max: int
    alphas: tuple[Fraction, ...]
    brute_n_max: int
    brute_p_max: int
    cross_checks: bool


FAST = Level("fast", 12, 8, (Fraction(0), Fraction(1, 2), Fraction(1)), 6, 5, False)
FULL = Level(
    "full",
    30,
    12,
    (Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1)),
    8,
    6,
    True,
)


@dataclass
class Report:
    level: str
    checks: list[str] = field(default_factory=list)

    def ok(self, name: str) -> None:
        log.info("ok: %s", name)
        self.checks.append(name)


def _maybe_corrupt(n: int, a: Fraction, images: tuple[Poly, ...]) -> tuple[Poly, ...]:
    if FAULT_INJECTION is None:
        return images
    fn, fa, fp = FAULT_INJECTION
    if (fn, Fraction(fa)) != (n, a) or fp >= len(images):
        return images
    out = list(images)
    out[fp] = out[fp] + Poly([Fraction(1, 10**9)])
    return tuple(out)


def _e2_image(n: int, a: Fraction) -> Poly:
    return Poly([0, 0, 1]) + Z_ONE_MINUS_Z * (Fraction(2, n + 1) * (1 + (1 - a) / n))


def check_moments(level: Level, report: Report) -> None:
    for a in level.alphas:
        for n in range(2, level.n_max + 1):
            rec = monomial_image_recurrence(n, a, level.p_max).images
            closed = _maybe_corrupt(n, a, monomial_image_closed(n, a, level.p_max).images)
            for p in range(level.p_max + 1):
                if rec[p] != closed[p]:
                    raise VerificationFailure(
                        f"dual-path mismatch at (n={n}, alpha={a}, p={p}): "
                        f"recurrence {rec[p]} vs closed form {closed[p]}"
                    )
                img = closed[p]
                if img.degree > min(n, p):
                    raise VerificationFailure(f"degree bound fails at (n={n}, alpha={a}, p={p})")
                if img(Fraction(1)) != 1 or (p >= 1 and img(Fraction(0)) != 0):
                    raise VerificationFailure(f"endpoint interpolation fails at (n={n}, alpha={a}, p={p})")
            if level.p_max >= 2 and closed[2] != _e2_image(n, a):
                raise VerificationFailure(f"e2 closed form fails at (n={n}, alpha={a})")
            if n <= level.brute_n_max:
                for p in range(level.brute_p_max + 1):
                    if monomial_image_direct(n, a, p) != closed[p]:
                        raise VerificationFailure(
                            f"brute-force mismatch at (n={n}, alpha={a}, p={p})"
                        )
    report.ok(f"moment tables n<={level.n_max}, p<={level.p_max}, {len(level.alphas)} alphas")


def check_basis(level: Level, report: Report) -> None:
    one = Poly([1])
    for n in range(1, level.n_max + 1):
        for a in level.alphas:
            qs = alpha_basis_polys(n, a)
            total = Poly.zero()
            for q in qs:
                total = total + q
            if total != one:
                raise VerificationFailure(f"partition of unity fails at (n={n}, alpha={a})")
        if n >= 2 and alpha_basis_polys(n, 1) != [bernstein_poly(n, k) for k in range(n + 1)]:
            raise VerificationFailure(f"alpha=1 reduction fails at n={n}")
    report.ok(f"basis identities n<={level.n_max}")


def check_monomial_bound(level: Level, report: Report) -> None:
    for r in (1.0, 1.5):
        zs = circle_points(r, 720)
        for a in level.alphas:
            for n in range(2, min(level.n_max, 20) + 1):
                table = monomial_image_closed(n, a, min(level.p_max, 10))
                for p, img in enumerate(table.images):
                    peak = float(np.max(np.abs(np.polynomial.polynomial.polyval(zs, img.to_array()))))
                    if peak > r**p * (1 + 1e-12):
                        raise VerificationFailure(
                            f"|G(e_p)| <= r^p fails at (n={n}, alpha={a}, p={p}, r={r}): {peak}"
                        )
    report.ok("monomial image bound on circles r in {1, 1.5}")


def check_upper_bounds(level: Level, report: Report) -> None:
    disk = DiskSpec(1.0)
    ns = [4, 8, 16, 32] if level.name == "fast" else [4, 8, 16, 32, 64, 128, 256]
    for f in standard_test_set():
        for a in level.alphas:
            try:
                verify_upper_bound(f, ns, a, disk)
            except BoundViolation as exc:
                raise VerificationFailure(str(exc)) from exc
    report.ok(f"sup error <= C_r(f)/n for n in {ns}")


def check_cross_paths(report: Report) -> None:
    f = exp_series()
    x = np.linspace(-1.0, 1.0, 5)
    zs = (x[:, None] + 1j * x[None, :]).ravel()
    zs = zs / np.maximum(1.0, np.abs(zs))
    a = Fraction(1, 2)
    analytic = apply_analytic(f, 10, a, zs, DiskSpec(1.0))
    quad = apply_quadrature(np.exp, 1.0, np.e, 10, a, zs)
    gap = float(np.max(np.abs(analytic - quad)))
    if gap > 1e-10:
        raise VerificationFailure(f"quadrature vs analytic differ by {gap:.3e}")
    report.ok("quadrature path matches analytic path")
    for l in (1, 2):
        try:
            verify_simultaneous(f, l, [8, 16, 32, 64], a, 1.0, 1.5)
        except BoundViolation as exc:
            raise VerificationFailure(str(exc)) from exc
    report.ok("contour derivative matches exact derivative; Cauchy bounds hold")


def run_verify(level: str = "fast") -> Report:
    """Run the suite; raises :class:`VerificationFailure` on the first failing check."""
    lv = FULL if level == "full" else FAST
    report = Report(lv.name)
    check_basis(lv, report)
    check_moments(lv, report)
    check_monomial_bound(lv, report)
    check_upper_bounds(lv, report)
    if lv.cross_checks:
        check_cross_paths(report)
    return report
