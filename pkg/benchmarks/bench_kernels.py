"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel is run once untimed (to trigger compilation), then timed
``--repeat`` times; the best time is reported.  Results are also checked for
equality between the two backends.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from monocoh import _kernels
from monocoh.algebra import builtin
from monocoh.graphcore import complete_bipartite, coherent_barycentric


def best_of(fn, repeat: int) -> float:
    fn()
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def cases():
    g = coherent_barycentric(complete_bipartite(2, 3))  # 12 edges
    h = complete_bipartite(3, 6)  # 18 edges
    for name, gr in (("indeg<=1 masks, 12 edges", g), ("indeg<=1 masks, 18 edges", h)):
        src = np.array([s for s, _ in gr.edges], dtype=np.int64)
        tgt = np.array([t for _, t in gr.edges], dtype=np.int64)
        yield name, "indeg_le_one_masks", (src, tgt, gr.n)
    for a, k in ((3, 7), (4, 7)):
        table = builtin("trunc", a).table_array()
        yield f"merge block trunc:{a}, {k} factors", "merge_block", (a, k, 1, 4, table)
    rng = np.random.default_rng(7)
    for n in (48, 63):
        dense = rng.integers(0, 2, size=(400, n), dtype=np.int64)
        yield f"dense rank mod 101, 400x{n}", "rank_mod_p", (dense, 101)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        print("numba is not importable; only the numpy path can run")
        return
    print(f"{'kernel':40s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>9s}")
    for name, kernel, params in cases():
        f_np = getattr(_kernels, f"{kernel}_numpy")
        f_nb = getattr(_kernels, f"{kernel}_numba")
        r_np, r_nb = f_np(*params), f_nb(*params)
        same = all(np.array_equal(x, y) for x, y in zip(r_np, r_nb)) if isinstance(r_np, tuple) \
            else np.array_equal(r_np, r_nb)
        if not same:
            raise SystemExit(f"{name}: backends disagree")
        t_np = best_of(lambda: f_np(*params), args.repeat)
        t_nb = best_of(lambda: f_nb(*params), args.repeat)
        print(f"{name:40s} {1e3 * t_np:12.2f} {1e3 * t_nb:12.2f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
