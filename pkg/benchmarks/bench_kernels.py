"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each case runs once per backend for warm-up, then ``--repeat`` times; the
best time is reported. Results from both backends are compared element by
element before timing.
"""
import argparse
import time

import numpy as np

from growthlab import kernels
from growthlab.kernels import ADD, MUL
from growthlab.rng import make_rng


def _cases():
    rng = make_rng(2024, 0xBE7C)
    ap = np.arange(1, 10**4 + 1, dtype=np.int64)
    wide = np.unique(rng.integers(1, 10**6, size=3000))
    rand = np.unique(rng.integers(1, 10**4, size=2000))
    small = np.unique(rng.integers(1, 10**3, size=300))
    huge = np.unique(rng.integers(1, 10**9, size=1500))
    yield "dense AP 10^4 + AP 10^4", lambda: kernels.dense_sumset(ap, ap, 10**8)
    yield "dense 7*AP (span 7e4)", lambda: kernels.dense_sumset(ap * 7, ap, 10**8)
    yield "sparse sum 3000 x 3000 wide", lambda: kernels.sparse_combine(wide, wide, ADD, 10**8)
    yield "sparse product 2000 x 2000", lambda: kernels.sparse_combine(rand, rand, MUL, 10**8)
    yield "sparse product 300 x 300", lambda: kernels.sparse_combine(small, small, MUL, 10**8)
    yield "sparse product 1500, range 1e18", lambda: kernels.sparse_combine(huge, huge, MUL, 10**8)
    yield "rep_count 2000, t=1", lambda: kernels.rep_count(rand, 1)


def _best(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; timing the numpy fallback only")
    header = f"{'case':32}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for name, fn in _cases():
        outs, times = {}, {}
        for b in backends:
            with kernels.use_backend(b):
                outs[b] = fn()
                times[b] = _best(fn, args.repeat)
        ref = outs[backends[0]]
        for b in backends[1:]:
            if not np.array_equal(np.asarray(outs[b]), np.asarray(ref)):
                raise SystemExit(f"backends disagree on {name}")
        row = f"{name:32}" + "".join(f"{times[b] * 1e3:10.2f}ms" for b in backends)
        if len(backends) == 2:
            row += f"{times['python'] / times['cython']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
