"""Time the compiled and pure-Python critical-point kernels on the same inputs.

    python benchmarks/bench_kernels.py [--sizes 2 4 8] [--repeat 3]

Both backends run the identical deflated sweeps; the script also reports the
largest difference between the states they return.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from geomqm.kernels import BACKENDS
from geomqm.spectral import _random_starts


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = 0.5 * (z + z.conj().T)
    return h / np.linalg.norm(h)


def time_backend(kern, A, starts, signs, tol, repeat):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = kern.sweeps(A, starts, signs, 0.5, tol, 20000)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 8])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if "cython" not in BACKENDS:
        print("compiled extension not built; timing the Python fallback only")
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>3} {'restarts':>8} {'backend':>8} {'seconds':>10} {'speedup':>8} {'max |dx|':>10}")
    for n in args.sizes:
        restarts = 20 * n
        A = random_hermitian(n, rng)
        starts = _random_starts(args.seed, restarts, n)
        signs = np.where(np.arange(restarts) % 2 == 0, 1, -1)
        tol = 1e-9 / 2 ** (n / 2)
        results = {name: time_backend(k, A, starts, signs, tol, args.repeat) for name, k in sorted(BACKENDS.items())}
        t_py, (x_py, _, _) = results["python"]
        for name, (t, (x, _, _)) in results.items():
            diff = np.max(np.abs(x - x_py))
            print(f"{n:>3} {restarts:>8} {name:>8} {t:>10.4f} {t_py / t:>8.1f} {diff:>10.2e}")


if __name__ == "__main__":
    main()
