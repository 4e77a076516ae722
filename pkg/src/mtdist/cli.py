"""Command line front end.

Exit codes: 0 success, 1 bad arguments, 2 I/O or parse failure,
3 oracle-check mismatch.
"""

from __future__ import annotations

import argparse
import os
import random
import sys

from ._fmt import fmt_float
from .analysis import (
    average_linkage,
    dendrogram_text,
    distance_matrix,
    export_matrix,
    lag_profile,
    matrix_to_csv,
    outlier_scores,
    parse_matrix_csv,
    profile_to_csv,
)
from .distance import distance, distance_with_mapping, write_pmap
from .grid import load_grid, compute_join_tree, compute_split_tree, simplify
from .oracle import TreeGenConfig, brute_force_distance, random_tree
from .tree import ParseError, load_mt, save_mt, write_mt


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    p = _Parser(prog="mtdist",
                description="Merge tree edit distance via path mappings.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dist", parents=[], help="distance between two trees")
    d.add_argument("tree1")
    d.add_argument("tree2")
    d.add_argument("--mapping", metavar="OUT.pmap",
                   help="also write an optimal path mapping")
    d.set_defaults(func=_cmd_dist)

    m = sub.add_parser("matrix", help="pairwise distance matrix")
    m.add_argument("input", help=".mt directory or list file of paths")
    m.add_argument("-o", "--output", required=True, metavar="OUT.csv")
    m.add_argument("--svg", metavar="OUT.svg", help="also write a heatmap")
    m.add_argument("--workers", type=int, default=1)
    m.set_defaults(func=_cmd_matrix)

    c = sub.add_parser("cluster", help="average-linkage dendrogram + scores")
    c.add_argument("matrix", metavar="M.csv")
    c.add_argument("-o", "--output", required=True, metavar="OUT.txt")
    c.set_defaults(func=_cmd_cluster)

    t = sub.add_parser("tree", help="extract a merge tree from a grid")
    t.add_argument("grid", metavar="F.grid")
    t.add_argument("--kind", choices=("join", "split"), required=True)
    t.add_argument("--conn", type=int, choices=(4, 8), default=4)
    t.add_argument("--simplify", type=float, metavar="EPS")
    t.add_argument("--relative", action="store_true",
                   help="EPS as a fraction of the value range")
    t.add_argument("-o", "--output", required=True, metavar="OUT.mt")
    t.set_defaults(func=_cmd_tree)

    l = sub.add_parser("lags", help="lag profile of a distance matrix")
    l.add_argument("matrix", metavar="M.csv")
    l.add_argument("-o", "--output", required=True, metavar="OUT.csv")
    l.set_defaults(func=_cmd_lags)

    o = sub.add_parser("oracle-check",
                       help="random DP vs brute-force equivalence check")
    o.add_argument("--pairs", type=int, default=50)
    o.add_argument("--max-edges", type=int, default=6)
    o.add_argument("--seed", type=int, default=0)
    o.set_defaults(func=_cmd_oracle_check)
    return p


def _cmd_dist(args, parser):
    t1 = load_mt(args.tree1)
    t2 = load_mt(args.tree2)
    if args.mapping:
        d, mapping = distance_with_mapping(t1, t2)
        with open(args.mapping, "w", encoding="utf-8") as fh:
            fh.write(write_pmap(mapping, d))
    else:
        d = distance(t1, t2)
    print(fmt_float(d))
    return 0


def _collect_inputs(spec: str) -> list[str]:
    if os.path.isdir(spec):
        names = sorted(n for n in os.listdir(spec) if n.endswith(".mt"))
        if not names:
            raise ValueError(f"no .mt files in directory {spec!r}")
        return [os.path.join(spec, n) for n in names]
    base = os.path.dirname(os.path.abspath(spec))
    paths = []
    with open(spec, "r", encoding="utf-8") as fh:
        for ln in fh:
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            paths.append(ln if os.path.isabs(ln) else os.path.join(base, ln))
    if not paths:
        raise ValueError(f"list file {spec!r} names no trees")
    return paths


def _cmd_matrix(args, parser):
    if args.workers < 1:
        parser.error("--workers must be at least 1")
    trees = [load_mt(p) for p in _collect_inputs(args.input)]
    m = distance_matrix(trees, workers=args.workers)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(matrix_to_csv(m))
    if args.svg:
        export_matrix(m, "svg", args.svg)
    return 0


def _cmd_cluster(args, parser):
    with open(args.matrix, "r", encoding="utf-8") as fh:
        m = parse_matrix_csv(fh.read())
    merges = average_linkage(m)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(dendrogram_text(merges))
    for i, s in enumerate(outlier_scores(m)):
        print(f"{i} {fmt_float(s)}")
    return 0


def _cmd_tree(args, parser):
    if args.relative and args.simplify is None:
        parser.error("--relative requires --simplify")
    if args.simplify is not None and args.simplify < 0:
        parser.error("--simplify must be nonnegative")
    field = load_grid(args.grid)
    if args.kind == "join":
        t = compute_join_tree(field, connectivity=args.conn)
    else:
        t = compute_split_tree(field, connectivity=args.conn)
    if args.simplify is not None:
        t = simplify(t, args.simplify, relative=args.relative)
    save_mt(t, args.output)
    return 0


def _cmd_lags(args, parser):
    with open(args.matrix, "r", encoding="utf-8") as fh:
        m = parse_matrix_csv(fh.read())
    profile = lag_profile(m)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(profile_to_csv(profile))
    return 0


def _cmd_oracle_check(args, parser):
    if args.pairs < 1:
        parser.error("--pairs must be at least 1")
    if not 1 <= args.max_edges <= 8:
        parser.error("--max-edges must be between 1 and 8")
    rng = random.Random(args.seed)
    grow_max = (args.max_edges + 1) // 2
    for i in range(args.pairs):
        cfgs = []
        for _ in range(2):
            cfgs.append(TreeGenConfig(
                seed=rng.randrange(2 ** 32),
                edge_count=rng.randint(0, grow_max),
                max_degree=rng.choice((2, 3))))
        t1 = random_tree(cfgs[0])
        t2 = random_tree(cfgs[1])
        dp = distance(t1, t2)
        bf = brute_force_distance(t1, t2)
        if abs(dp - bf) > 1e-9:
            print(f"mismatch at pair {i}: dp={fmt_float(dp)} "
                  f"oracle={fmt_float(bf)}")
            print("tree1:")
            sys.stdout.write(write_mt(t1))
            print("tree2:")
            sys.stdout.write(write_mt(t2))
            return 3
    print(f"{args.pairs} pairs agree within 1e-9")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (ParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
