"""Time the numba kernels against the numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from gdop import _kernels


def cases():
    rng = np.random.default_rng(0)
    zs = np.exp(2j * np.pi * np.arange(1440) / 1440)
    coeffs = rng.normal(size=129) + 0j
    ts = rng.uniform(size=1024)
    for n in (64, 512):
        ln, lm = _kernels.log_binomial_row(n), _kernels.log_binomial_row(n - 2)
        yield (
            f"alpha_basis_grid n={n}",
            lambda n=n, ln=ln, lm=lm: _kernels.numpy_alpha_basis_grid(n, 0.5, zs, ln, lm),
            lambda n=n, ln=ln, lm=lm: _kernels.numba_alpha_basis_grid(n, 0.5, zs, ln, lm),
        )
        yield (
            f"bernstein_grid n={n}",
            lambda n=n, ln=ln: _kernels.numpy_bernstein_grid(n, ts, ln),
            lambda n=n, ln=ln: _kernels.numba_bernstein_grid(n, ts, ln),
        )
    yield (
        "horner deg=128",
        lambda: _kernels.numpy_horner(coeffs, zs),
        lambda: _kernels.numba_horner(coeffs, zs),
    )


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed")
    print(f"{'kernel':<26}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, np_fn, nb_fn in cases():
        nb_fn()  # compile
        a, b = np_fn(), nb_fn()
        # entries span hundreds of orders of magnitude; compare row-normwise
        scale = np.max(np.abs(b), axis=-1, keepdims=True) if b.ndim > 1 else np.max(np.abs(b))
        assert np.all(np.abs(a - b) <= 1e-11 * scale), name
        t_np = min(timeit.repeat(np_fn, number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(nb_fn, number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<26}{t_np:>12.3f}{t_nb:>12.3f}{t_np / t_nb:>10.1f}x")


if __name__ == "__main__":
    main()
