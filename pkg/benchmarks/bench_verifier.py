"""Compare the numba and numpy triple-sweep kernels, and the full verifier paths.

Usage: python benchmarks/bench_verifier.py [--sizes 64 128 256] [--repeat 3]
"""

import argparse
import time

import numpy as np

from acutesets import kernels
from acutesets.doubling import power_construct
from acutesets.verifier import verify_acute


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_kernels(sizes, dim, repeat):
    rng = np.random.default_rng(0)
    print("kernel sweep (int64 Gram, d=%d)" % dim)
    print("%6s %12s %12s %9s" % ("n", "numpy [s]", "numba [s]", "speedup"))
    for n in sizes:
        P = rng.integers(-1000, 1000, size=(n, dim), dtype=np.int64)
        G = kernels.gram_int64(P)
        t_np, ref = best_of(lambda: kernels.sweep_int64_numpy(G, 0, n), repeat)
        if kernels.sweep_int64_numba is None:
            print("%6d %12.4f %12s %9s" % (n, t_np, "n/a", "n/a"))
            continue
        kernels.sweep_int64_numba(G[:4, :4].copy(), 0, 4)  # compile outside the timing
        t_nb, out = best_of(lambda: kernels.sweep_int64_numba(G, 0, n), repeat)
        assert all(np.array_equal(a, b) for a, b in zip(ref, out)), "kernels disagree"
        print("%6d %12.4f %12.4f %8.1fx" % (n, t_np, t_nb, t_np / t_nb))


def bench_paths(dims, repeat):
    print("\nfull verifier on doubling sets (int64 vs forced big-integer path)")
    print("%4s %6s %12s %12s" % ("d", "n", "int64 [s]", "bigint [s]"))
    for d in dims:
        pts = power_construct(d)
        t_i, a = best_of(lambda: verify_acute(pts, workers=1), repeat)
        t_b, b = best_of(lambda: verify_acute(pts, workers=1, force_bigint=True), repeat)
        assert a == b, "paths disagree"
        print("%4d %6d %12.4f %12.4f" % (d, len(pts), t_i, t_b))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256])
    ap.add_argument("--dim", type=int, default=8)
    ap.add_argument("--path-dims", type=int, nargs="+", default=[8, 10, 12])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print("backend: %s" % kernels.backend())
    bench_kernels(args.sizes, args.dim, args.repeat)
    bench_paths(args.path_dims, args.repeat)


if __name__ == "__main__":
    main()
