"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--n 100000] [--repeat 5]

Each kernel is run once before timing so numba compilation is excluded.
Reports the best of `repeat` wall-clock runs and checks the two paths agree.
"""

import argparse
import time

import numpy as np

from hdatail import _kernels
from hdatail.oracles import simulate
from hdatail.sample import Reference, antiranks
from hdatail.spectral import standard_spectral, silverman_bandwidth


def best_of(fn, repeat):
    fn()  # warm-up / JIT compile
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--gridsize", type=int, default=512)
    args = ap.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    s = simulate("ex21", args.n, 0)
    ref = np.minimum(s.x1, s.x2)
    queries = s.pairs.ravel()
    k = int(np.sqrt(args.n)) * 10
    pts = standard_spectral(antiranks(s, Reference.MIN), k).points
    grid = np.linspace(0.0, 1.0, args.gridsize)
    bw = silverman_bandwidth(pts)

    cases = [
        (f"anti-ranks (n={args.n}, {queries.size} queries)",
         lambda: _kernels.count_at_least_numpy(ref, queries),
         lambda: _kernels.count_at_least_numba(ref, queries)),
        (f"reflected KDE ({pts.size} points, {args.gridsize} grid, bw={bw:.3f})",
         lambda: _kernels.reflected_kde_numpy(pts, grid, bw),
         lambda: _kernels.reflected_kde_numba(pts, grid, bw)),
    ]
    print(f"{'kernel':<58} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, f_np, f_nb in cases:
        np.testing.assert_allclose(f_np(), f_nb(), rtol=1e-9, atol=1e-12)
        t_np, t_nb = best_of(f_np, args.repeat), best_of(f_nb, args.repeat)
        print(f"{name:<58} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {t_np / t_nb:>7.2f}x")


if __name__ == "__main__":
    main()
