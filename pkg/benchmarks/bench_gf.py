"""Compare the numba and numpy GF(p) kernels on random rank/solve workloads.

Usage: python benchmarks/bench_gf.py [--sizes 256 512 1024] [--p 2 3] [--repeat 3]

The numba path is compiled (and cached) on first use; a warmup call is taken
before timing so compilation does not pollute the numbers.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cqca import _gf


def _bench_once(n: int, p: int, backend: str, rng: np.random.Generator) -> tuple[float, float]:
    a = rng.integers(0, p, size=(n, 2 * n)).astype(np.int64)
    sq = rng.integers(0, p, size=(n, n)).astype(np.int64)
    b = rng.integers(0, p, size=n).astype(np.int64)
    t0 = time.perf_counter()
    _gf.rank_mod(a, p, backend=backend)
    t1 = time.perf_counter()
    _gf.solve_mod(sq, b, p, backend=backend)
    t2 = time.perf_counter()
    return t1 - t0, t2 - t1


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[128, 256, 512])
    parser.add_argument("--p", type=int, nargs="+", default=[2, 3])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = ["numpy"]
    if _gf.backend_name() == "numba":
        backends.insert(0, "numba")
        # warm up compilation outside the timed region
        warm = np.ones((4, 4), dtype=np.int64)
        _gf.rank_mod(warm, 2, backend="numba")
        _gf.solve_mod(warm, np.ones(4, dtype=np.int64), 2, backend="numba")
    else:
        print("numba backend unavailable; timing numpy only")

    print(f"{'backend':>8} {'p':>3} {'n':>6} {'rank[s]':>10} {'solve[s]':>10}")
    for p in args.p:
        for n in args.sizes:
            for backend in backends:
                rng = np.random.default_rng(12345)
                ranks, solves = [], []
                for _ in range(args.repeat):
                    tr, ts = _bench_once(n, p, backend, rng)
                    ranks.append(tr)
                    solves.append(ts)
                print(
                    f"{backend:>8} {p:>3} {n:>6} {min(ranks):>10.4f} {min(solves):>10.4f}"
                )


if __name__ == "__main__":
    main()
