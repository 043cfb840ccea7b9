"""Benchmark the mod-p rank kernel: numba JIT vs the pure-numpy fallback.

The interpolation oracle spends essentially all of its time in this kernel,
on matrices shaped like fat-point condition systems (tens of rows/columns).
Run with `python3 benchmarks/bench_kernels.py`; set RBN_DISABLE_NUMBA=1 to
confirm the fallback path end to end.
"""

import time

import numpy as np

from rbn import _modp

PRIME = 1000003
# (rows, cols) drawn from typical oracle matrices: degree d gives
# (d+1)(d+2)/2 columns and sum m_i (m_i + 1) / 2 rows
SHAPES = [(10, 21), (30, 36), (50, 45), (90, 66), (150, 66)]
REPEATS = 200


def bench(fn, mats):
    # warm up (numba compiles on first call)
    fn(mats[0].copy(), PRIME)
    start = time.perf_counter()
    for mat in mats:
        fn(mat.copy(), PRIME)
    return time.perf_counter() - start


def main():
    rng = np.random.default_rng(0)
    print(f"kernel backend available: {_modp.KERNEL_BACKEND}")
    print(f"{'shape':>12} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>9}")
    for rows, cols in SHAPES:
        mats = [
            rng.integers(0, PRIME, size=(rows, cols), dtype=np.int64)
            for _ in range(REPEATS)
        ]
        t_numpy = bench(_modp._rank_numpy, mats)
        if _modp.KERNEL_BACKEND == "numba":
            t_numba = bench(lambda m, p: _modp._rank_jit(m, p), mats)
            ratio = f"{t_numpy / t_numba:8.1f}x"
            numba_ms = f"{1000 * t_numba / REPEATS:12.3f}"
        else:
            numba_ms, ratio = " unavailable", "      n/a"
        print(f"{rows:>5}x{cols:<6} {1000 * t_numpy / REPEATS:12.3f} {numba_ms} {ratio}")
        # the two implementations must agree exactly
        for mat in mats[:10]:
            assert _modp._rank_numpy(mat.copy(), PRIME) == _modp.modp_rank(mat, PRIME)


if __name__ == "__main__":
    main()
