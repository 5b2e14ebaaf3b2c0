"""Numeric inner loops, compiled with numba when available.

Set ``GDOP_DISABLE_NUMBA=1`` to force the pure-numpy path.  Both paths are
importable (``numpy_alpha_basis_grid`` / ``numba_alpha_basis_grid`` ...) so
tests and the benchmark can compare them directly.
"""

from __future__ import annotations

import math
import os

import numpy as np

_DISABLED = os.environ.get("GDOP_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
BACKEND = "numba" if HAVE_NUMBA and not _DISABLED else "numpy"


# --------------------------------------------------------------------------
# numpy reference implementations

def numpy_horner(coeffs: np.ndarray, zs: np.ndarray) -> np.ndarray:
    acc = np.zeros(zs.shape, dtype=np.complex128)
    for c in coeffs[::-1]:
        acc = acc * zs + c
    return acc


def _polar_terms(logc, k, m, z):
    # exp(logc) * z**k * (1-z)**m evaluated in polar form, 0**0 == 1
    w = 1.0 - z
    az = np.abs(z)[:, None]
    aw = np.abs(w)[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        lmag = logc[None, :] + np.where(k > 0, k * np.log(az), 0.0) + np.where(m > 0, m * np.log(aw), 0.0)
    phase = k * np.angle(z)[:, None] + m * np.angle(w)[:, None]
    out = np.exp(lmag) * np.exp(1j * phase)
    out = np.where((k > 0) & (az == 0.0), 0.0, out)
    out = np.where((m > 0) & (aw == 0.0), 0.0, out)
    return out


def numpy_alpha_basis_grid(n, alpha, zs, logc_n, logc_nm2):
    k = np.arange(n + 1)[None, :]
    out = alpha * _polar_terms(logc_n, k, n - k, zs)
    if alpha != 1.0:
        lc1 = np.full(n + 1, -np.inf)
        lc1[: n - 1] = logc_nm2
        lc2 = np.full(n + 1, -np.inf)
        lc2[2:] = logc_nm2
        # part 1: C(n-2,k) z^k (1-z)^(n-1-k); part 2: C(n-2,k-2) z^(k-1) (1-z)^(n-k)
        t1 = _polar_terms(lc1, k, np.maximum(n - 1 - k, 0), zs)
        t2 = _polar_terms(lc2, np.maximum(k - 1, 0), n - k, zs)
        out = out + (1.0 - alpha) * (t1 + t2)
    return out


def numpy_bernstein_grid(n, ts, logc):
    k = np.arange(n + 1)[None, :]
    return _polar_terms(logc, k, n - k, ts.astype(np.complex128)).real


# --------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def numba_horner(coeffs, zs):
        out = np.empty(zs.shape[0], dtype=np.complex128)
        for i in range(zs.shape[0]):
            z = zs[i]
            acc = 0j
            for j in range(coeffs.shape[0] - 1, -1, -1):
                acc = acc * z + coeffs[j]
            out[i] = acc
        return out

    @numba.njit(cache=True)
    def _term(logc, k, m, lz, az, argz, lw, aw, argw):
        if logc == -np.inf:
            return 0j
        if k > 0 and az == 0.0:
            return 0j
        if m > 0 and aw == 0.0:
            return 0j
        lmag = logc
        ph = 0.0
        if k > 0:
            lmag += k * lz
            ph += k * argz
        if m > 0:
            lmag += m * lw
            ph += m * argw
        r = math.exp(lmag)
        return complex(r * math.cos(ph), r * math.sin(ph))

    @numba.njit(cache=True)
    def numba_alpha_basis_grid(n, alpha, zs, logc_n, logc_nm2):
        out = np.zeros((zs.shape[0], n + 1), dtype=np.complex128)
        beta = 1.0 - alpha
        for i in range(zs.shape[0]):
            z = zs[i]
            w = 1.0 - z
            az = abs(z)
            aw = abs(w)
            lz = math.log(az) if az > 0.0 else 0.0
            lw = math.log(aw) if aw > 0.0 else 0.0
            argz = math.atan2(z.imag, z.real)
            argw = math.atan2(w.imag, w.real)
            for k in range(n + 1):
                v = alpha * _term(logc_n[k], k, n - k, lz, az, argz, lw, aw, argw)
                if beta != 0.0:
                    if k <= n - 2:
                        v += beta * _term(logc_nm2[k], k, n - 1 - k, lz, az, argz, lw, aw, argw)
                    if k >= 2:
                        v += beta * _term(logc_nm2[k - 2], k - 1, n - k, lz, az, argz, lw, aw, argw)
                out[i, k] = v
        return out

    @numba.njit(cache=True)
    def numba_bernstein_grid(n, ts, logc):
        out = np.zeros((ts.shape[0], n + 1))
        for i in range(ts.shape[0]):
            t = ts[i]
            s = 1.0 - t
            lt = math.log(t) if t > 0.0 else 0.0
            ls = math.log(s) if s > 0.0 else 0.0
            for k in range(n + 1):
                if (k > 0 and t == 0.0) or (k < n and s == 0.0):
                    continue
                lmag = logc[k]
                if k > 0:
                    lmag += k * lt
                if k < n:
                    lmag += (n - k) * ls
                out[i, k] = math.exp(lmag)
        return out

else:  # pragma: no cover
    numba_horner = numba_alpha_basis_grid = numba_bernstein_grid = None


# --------------------------------------------------------------------------
# dispatch

def horner(coeffs, zs) -> np.ndarray:
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    zs = np.ascontiguousarray(zs, dtype=np.complex128)
    if BACKEND == "numba":
        return numba_horner(coeffs, zs)
    return numpy_horner(coeffs, zs)


def alpha_basis_grid(n, alpha, zs, logc_n, logc_nm2) -> np.ndarray:
    zs = np.ascontiguousarray(zs, dtype=np.complex128)
    if BACKEND == "numba":
        return numba_alpha_basis_grid(n, float(alpha), zs, logc_n, logc_nm2)
    return numpy_alpha_basis_grid(n, float(alpha), zs, logc_n, logc_nm2)


def bernstein_grid(n, ts, logc) -> np.ndarray:
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    if BACKEND == "numba":
        return numba_bernstein_grid(n, ts, logc)
    return numpy_bernstein_grid(n, ts, logc)


def log_binomial_row(n: int) -> np.ndarray:
    """``log C(n, k)`` for k = 0..n from exact integers; ``-inf`` row when n < 0."""
    if n < 0:
        return np.full(0, -np.inf)
    return np.array([math.log(math.comb(n, k)) for k in range(n + 1)])
