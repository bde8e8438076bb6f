"""Time the numba kernels against the pure-numpy fallback.

    python3 bench/bench_kernels.py [--points 4000] [--repeat 5]

Both paths are called with ``use_numba`` set explicitly, so the
HARMBESOV_NO_NUMBA flag does not matter here. The first numba call is
reported separately because it includes compilation.
"""

import argparse
import time

import numpy as np

from harmbesov import _accel
from harmbesov.kernels import KernelSpec


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def ball(rng, n, count, rmax):
    x = rng.standard_normal((count, n))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x * rmax * rng.uniform(size=(count, 1)) ** (1.0 / n)


def cases(n, npts, rng):
    X = ball(rng, n, npts, 0.9)
    Y = ball(rng, n, npts, 0.9)
    seq = KernelSpec(n, 1.0).series().sequence
    poles = ball(rng, n, 3, 0.5)
    C = rng.standard_normal((3, 17)) + 1j * rng.standard_normal((3, 17))

    def kern(use):
        return _accel.kernel_sums(n, X, Y, seq.num, seq.den, 1, use_numba=use)

    def expn(use):
        return _accel.expansion_sums(n, X, poles, C, 2, use_numba=use)

    return {"kernel_sums(order=1)": kern, "expansion_sums(order=2)": expn}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=4000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"{'case':<28}{'n':>3}{'first numba':>14}{'numba':>11}{'numpy':>11}{'speedup':>9}  max|diff|")
    for n in (2, 3):
        for name, fn in cases(n, args.points, rng).items():
            t0 = time.perf_counter()
            a = fn(True)
            first = time.perf_counter() - t0
            b = fn(False)
            diff = float(np.max(np.abs(np.asarray(a[0]) - np.asarray(b[0]))))
            t_nb = best_of(lambda: fn(True), args.repeat)
            t_np = best_of(lambda: fn(False), args.repeat)
            print(f"{name:<28}{n:>3}{first:>13.3f}s{t_nb:>10.4f}s{t_np:>10.4f}s{t_np / t_nb:>8.1f}x  {diff:.1e}")


if __name__ == "__main__":
    main()
