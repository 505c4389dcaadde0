"""Time the numba kernels against their pure Python/numpy versions.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Compilation is excluded: every compiled kernel runs once before timing.  With
SGS_DISABLE_NUMBA=1 both columns run the uncompiled code.
"""

import argparse
import time

import numpy as np

from sgshift import _kernels
from sgshift.graph import build_unordered_limited
from sgshift.nset import NSet
from sgshift.oracle import _tables


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.default_rng(7)
    C = rng.random((200, 200))
    C[C < 0.7] = 0.0
    np.fill_diagonal(C, 0.0)
    C += np.roll(np.eye(200), 1, axis=1)  # keep it irreducible
    yield "perron_bounds 200x200", _kernels.perron_bounds, _kernels.perron_bounds_py, (C, 1e-13, np.nan, 200_000)

    g = build_unordered_limited([NSet.naturals(), NSet.finite([1, 2]), NSet.progression(1, 2), NSet.finite([1])])
    n = 10
    adj, member, ge, infinite = _tables(g, n)
    yield f"count_words n={n}", _kernels.count_words, _kernels.count_words_py, (n, adj, member, ge)
    yield f"count_periodic n={n}", _kernels.count_periodic, _kernels.count_periodic_py, (n, adj, member, infinite)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    _kernels.warmup()
    print(f"numba active: {_kernels.HAVE_NUMBA}")
    print(f"{'kernel':<24}{'compiled [s]':>14}{'pure [s]':>12}{'speedup':>10}")
    for name, fast, slow, call_args in cases():
        a = fast(*call_args)
        b = slow(*call_args)
        if not np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float)):
            raise SystemExit(f"{name}: compiled and pure results differ: {a} vs {b}")
        tf = _best(lambda: fast(*call_args), args.repeat)
        ts = _best(lambda: slow(*call_args), args.repeat)
        print(f"{name:<24}{tf:>14.4f}{ts:>12.4f}{ts / tf:>9.1f}x")


if __name__ == "__main__":
    main()
