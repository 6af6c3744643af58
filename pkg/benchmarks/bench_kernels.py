"""Time each hot kernel under the numba and the pure-numpy implementation.

    python3 benchmarks/bench_kernels.py --p 313 --repeat 3

Results must agree exactly; the script exits 1 if they do not.
"""
import argparse
import sys
import time

import numpy as np

from heilbronn_lab import kernels
from heilbronn_lab.core_arith import PrimeContext, build_gamma
from heilbronn_lab.correlation import autocorrelation, dyadic_levels
from heilbronn_lab.kernels import _numpy


def cases(p):
    ctx = PrimeContext(p)
    g = build_gamma(ctx)
    n = ctx.psq
    el = g.elements
    table = autocorrelation(el, n)
    d = dyadic_levels(table).levels[0][1]
    dmask = np.zeros(n, dtype=bool)
    dmask[d] = True
    ns = np.arange(1, n, dtype=np.int64)
    coeffs = np.arange(p, dtype=np.int64)
    return [
        ("powmod_array", (ns, p, n)),
        ("difference_counts", (el, el, n)),
        ("direct_dft", (el, np.ones(len(el)), n)),
        ("horner_all", (coeffs, p)),
        ("conv_on_set", (el, dmask, el, n)),
        ("triple_sum_direct", (el, dmask, table.counts, n)),
        ("c3_block", (d, el, g.bitmap, n)),
        ("c3_square_sum", (el, dmask, g.bitmap, n)),
    ]


def best_of(fn, args, repeat):
    out, best = None, float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def same(a, b):
    if isinstance(a, np.ndarray) and np.iscomplexobj(a):
        return np.allclose(a, b, atol=1e-8)
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=313)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.numba_impl is None:
        print("numba not installed; nothing to compare")
        return 0
    small = cases(5)
    for name, a in small:  # compile outside the timing
        getattr(kernels.numba_impl, name)(*a)
    print(f"p = {args.p}, best of {args.repeat}")
    print(f"{'kernel':<20}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    ok = True
    for name, a in cases(args.p):
        r1, t1 = best_of(getattr(kernels.numba_impl, name), a, args.repeat)
        r2, t2 = best_of(getattr(_numpy, name), a, args.repeat)
        agree = same(r1, r2)
        ok &= agree
        print(f"{name:<20}{t1:>12.4f}{t2:>12.4f}{t2 / t1:>10.1f}{'' if agree else '  MISMATCH'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
