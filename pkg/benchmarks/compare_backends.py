"""Compare the pure-Python DP kernel with the compiled one.

Times both backends on the same random tree pairs and checks they agree
bit for bit. Run from the repository root:

    python3 benchmarks/compare_backends.py
    python3 benchmarks/compare_backends.py --grows 9 17 33 65 --pairs 7
"""

import argparse
import random
import statistics
import time

from mtdist import _dp_py
from mtdist._backend import HAVE_COMPILED
from mtdist._prep import TreeArrays
from mtdist.oracle import TreeGenConfig, random_tree


def time_call(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(grow, pairs, reps, seed, max_degree):
    rng = random.Random(seed)
    rows = []
    for _ in range(pairs):
        t1 = random_tree(TreeGenConfig(seed=rng.randrange(2**32),
                                       edge_count=grow, max_degree=max_degree))
        t2 = random_tree(TreeGenConfig(seed=rng.randrange(2**32),
                                       edge_count=grow, max_degree=max_degree))
        a1, a2 = TreeArrays(t1), TreeArrays(t2)
        t_py = time_call(lambda: _dp_py.distance_arrays(a1, a2), reps)
        row = {"edges": t1.edge_count, "py": t_py, "cy": None}
        if HAVE_COMPILED:
            from mtdist import _dp_cy

            t_cy = time_call(lambda: _dp_cy.distance_arrays(a1, a2), reps)
            v_py, _ = _dp_py.distance_arrays(a1, a2)
            v_cy = _dp_cy.distance_arrays(a1, a2)
            if v_py != v_cy:
                raise AssertionError(
                    f"backends disagree: {v_py!r} vs {v_cy!r}")
            row["cy"] = t_cy
        rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grows", type=int, nargs="+", default=[5, 9, 17, 33],
                    help="growth steps per tree (a binary tree gets 2k-1 edges)")
    ap.add_argument("--pairs", type=int, default=5)
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-degree", type=int, default=2)
    args = ap.parse_args()

    if not HAVE_COMPILED:
        print("note: compiled kernel unavailable, timing pure python only")
    print(f"{'edges':>6} {'python':>12} {'compiled':>12} {'speedup':>8}")
    for grow in args.grows:
        rows = bench(grow, args.pairs, args.reps, args.seed, args.max_degree)
        edges = rows[0]["edges"]
        py = statistics.median(r["py"] for r in rows)
        if HAVE_COMPILED:
            cy = statistics.median(r["cy"] for r in rows)
            print(f"{edges:>6} {py*1e3:>10.2f}ms {cy*1e3:>10.2f}ms "
                  f"{py/cy:>7.1f}x")
        else:
            print(f"{edges:>6} {py*1e3:>10.2f}ms {'-':>12} {'-':>8}")
    if HAVE_COMPILED:
        print("bit parity: all timed pairs returned identical values")


if __name__ == "__main__":
    main()
