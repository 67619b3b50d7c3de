"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--m 6 64 256] [--repeat 200]

The FFT-bound operators (derivatives, products, the right-hand side) are
pure numpy in both modes, so only the double sums and log-space series are
compared here.  The first numba call (compilation) is excluded.
"""
import argparse
import timeit

import numpy as np

from ch2lab import _kernels as K


def bench(label, fast, slow, args, repeat):
    fast(*args)  # warm-up / compile
    t_fast = min(timeit.repeat(lambda: fast(*args), number=repeat, repeat=3)) / repeat
    t_slow = min(timeit.repeat(lambda: slow(*args), number=repeat, repeat=3)) / repeat
    same = np.allclose(fast(*args), slow(*args), rtol=1e-12, atol=0)
    print(f"{label:<28} numba {t_fast * 1e6:9.2f} us   numpy {t_slow * 1e6:9.2f} us   "
          f"speed-up {t_slow / t_fast:6.1f}x   agree={same}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, nargs="+", default=[6, 64, 256])
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        print("numba unavailable or disabled (CH2LAB_NUMBA=0); nothing to compare")
        return
    rng = np.random.default_rng(0)
    for m in args.m:
        a = np.concatenate(([0.0], rng.uniform(size=m + 1)))
        b = rng.uniform(size=m + 1)
        bench(f"ab_sums m={m}", K.ab_sums_numba, K.ab_sums_numpy, (a, b, m), args.repeat)
    for n in (13, 41):
        sq = rng.uniform(size=n) * 10.0 ** rng.uniform(-5, 5, n)
        bench(f"log_weighted_terms n={n}", K.log_weighted_terms_numba, K.log_weighted_terms_numpy,
              (sq, -0.7, 1.0, 1), args.repeat)
        logs = K.log_weighted_terms_numpy(sq, -0.7, 1.0, 1)
        bench(f"logsumexp n={n}", K.logsumexp_numba, K.logsumexp_numpy, (logs,), args.repeat)


if __name__ == "__main__":
    main()
