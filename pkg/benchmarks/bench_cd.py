"""Timing comparison for the coordinate descent kernel backends.

Runs the compiled extension and the NumPy fallback on identical weighted-L1
problems, checks that the fits agree, and prints per-size timings with the
speedup ratio. Problems are standardized Gaussian designs with a sparse
ground truth, solved at a fraction of the critical threshold so the active
set stays interesting.

Usage:
    python benchmarks/bench_cd.py --sizes 200x500,500x2000 --repeats 5
"""

import argparse
import sys
import time

import numpy as np

from hdlab import LinearModelSpec, gen_linear, standardize
from hdlab.kernels import _cd_py

try:
    from hdlab.kernels import _cd_cy
except ImportError:
    _cd_cy = None


def build_problem(n, d, seed):
    beta = {j: 2.0 * (-1.0) ** j for j in range(0, min(d, 10))}
    data = standardize(gen_linear(LinearModelSpec(n=n, d=d, beta=beta, noise_sd=0.5), seed))
    X = np.asfortranarray(data.X)
    y = data.y
    lam = 0.2 * float(np.max(np.abs(X.T @ y))) / n
    weights = np.full(d, lam)
    return X, y, weights


def time_backend(impl, X, y, weights, tol, max_iter, repeats):
    best = float("inf")
    beta = None
    for _ in range(repeats):
        beta = np.zeros(X.shape[1])
        start = time.perf_counter()
        iters, converged = impl.cd_weighted_l1(X, y, weights, beta, tol, max_iter)
        elapsed = time.perf_counter() - start
        if not converged:
            raise RuntimeError("kernel did not converge in %d sweeps" % max_iter)
        best = min(best, elapsed)
    return best, iters, beta


def parse_sizes(text):
    sizes = []
    for part in text.split(","):
        n, _, d = part.partition("x")
        sizes.append((int(n), int(d)))
    return sizes


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="200x500,500x2000,1000x5000",
                        help="comma list of NxD problem sizes")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repeats per size (best is reported)")
    parser.add_argument("--tol", type=float, default=1e-10)
    parser.add_argument("--max-iter", type=int, default=20000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if _cd_cy is None:
        print("compiled kernel unavailable; timing the NumPy fallback only",
              file=sys.stderr)

    header = "%10s %10s %10s %12s %12s %9s" % (
        "n", "d", "sweeps", "python_s", "cython_s", "speedup")
    print(header)
    print("-" * len(header))
    for n, d in parse_sizes(args.sizes):
        X, y, weights = build_problem(n, d, args.seed)
        t_py, iters, beta_py = time_backend(
            _cd_py, X, y, weights, args.tol, args.max_iter, args.repeats)
        if _cd_cy is None:
            print("%10d %10d %10d %12.4f %12s %9s" % (n, d, iters, t_py, "-", "-"))
            continue
        t_cy, iters_cy, beta_cy = time_backend(
            _cd_cy, X, y, weights, args.tol, args.max_iter, args.repeats)
        gap = float(np.max(np.abs(beta_py - beta_cy)))
        if gap > 1e-9:
            raise RuntimeError("backends disagree by %.3e at n=%d d=%d" % (gap, n, d))
        if iters != iters_cy:
            raise RuntimeError("sweep counts differ: %d vs %d" % (iters, iters_cy))
        print("%10d %10d %10d %12.4f %12.4f %8.1fx"
              % (n, d, iters, t_py, t_cy, t_py / t_cy))
    return 0


if __name__ == "__main__":
    sys.exit(main())
