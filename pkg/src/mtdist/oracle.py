"""Independent ground truth for the distance on tiny trees.

brute_force_distance enumerates every valid path mapping directly from
the definition and takes the cheapest one. It shares no code with the
dynamic program, so agreement between the two is meaningful evidence.
Also home to the seeded random tree generator used by property tests
and the oracle-check command.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .distance import PathMapping
from .tree import MergeTree

# enumeration is exponential; refuse anything that could take minutes
ENUM_EDGE_LIMIT = 8


@dataclass(frozen=True)
class TreeGenConfig:
    """Seeded recipe for a random tree.

    edge_count counts the grow steps: the tree starts as a single root
    edge and each further step splits an edge and sprouts a leaf, so a
    binary result has 2 * edge_count - 1 edges. max_degree above 2
    lets some steps attach the leaf to an existing saddle instead,
    producing higher-degree nodes.
    """
    seed: int
    edge_count: int
    label_low: float = 0.5
    label_high: float = 3.0
    max_degree: int = 2

    def __post_init__(self):
        if self.edge_count < 0:
            raise ValueError("edge_count must be nonnegative")
        if not (0 < self.label_low <= self.label_high):
            raise ValueError("need 0 < label_low <= label_high")
        if self.max_degree < 2:
            raise ValueError("max_degree must be at least 2")


def random_tree(cfg: TreeGenConfig) -> MergeTree:
    """Deterministic random tree; every intermediate is a valid tree."""
    if cfg.edge_count == 0:
        return MergeTree()
    rng = random.Random(cfg.seed)
    edges = [(1, 0, rng.uniform(cfg.label_low, cfg.label_high))]
    next_id = 2
    for _ in range(cfg.edge_count - 1):
        if cfg.max_degree > 2:
            n_children: dict[int, int] = {}
            for c, p, _ in edges:
                n_children[p] = n_children.get(p, 0) + 1
            roomy = sorted(v for v, k in n_children.items()
                           if v != 0 and 2 <= k < cfg.max_degree)
            if roomy and rng.random() < 0.3:
                at = roomy[rng.randrange(len(roomy))]
                edges.append((next_id, at,
                              rng.uniform(cfg.label_low, cfg.label_high)))
                next_id += 1
                continue
        c, p, lab = edges.pop(rng.randrange(len(edges)))
        f = rng.random() or 0.5
        mid = next_id
        edges.append((mid, p, lab * f))
        edges.append((c, mid, lab - lab * f))
        edges.append((next_id + 1, mid,
                      rng.uniform(cfg.label_low, cfg.label_high)))
        next_id += 2
    return MergeTree(edges)


def _down_paths(t: MergeTree) -> dict[int, list[tuple[int, ...]]]:
    # all downward paths (>= 1 edge) starting at each vertex
    out: dict[int, list[tuple[int, ...]]] = {}

    def walk(v: int) -> None:
        acc: list[tuple[int, ...]] = []
        for c in t.children[v]:
            walk(c)
            acc.append((v, c))
            acc.extend((v,) + p for p in out[c])
        out[v] = acc

    walk(t.root)
    return out


def _matchings(a: list[int], b: list[int]):
    """Partial injective matchings between a and b, each exactly once."""
    if not a:
        yield []
        return
    rest = a[1:]
    for m in _matchings(rest, b):
        yield m
    for x in b:
        b2 = [y for y in b if y != x]
        for m in _matchings(rest, b2):
            yield [(a[0], x)] + m


def _check_size(t1: MergeTree, t2: MergeTree) -> None:
    if t1.edge_count > ENUM_EDGE_LIMIT or t2.edge_count > ENUM_EDGE_LIMIT:
        raise ValueError(
            f"mapping enumeration is limited to {ENUM_EDGE_LIMIT} edges per tree")


def _raw_mappings(t1: MergeTree, t2: MergeTree):
    """Yield every valid mapping as a tuple of (path1, path2) pairs.

    Works outward from the root pair: the paths starting at an open
    site take distinct child directions on both sides, and every pair
    opens a new site at its endpoints. Condition 3 holds by
    construction; conditions 1 and 2 follow because paths at a site
    descend into disjoint subtrees. Each valid mapping is produced
    exactly once, the empty one included.
    """
    if t1.is_empty or t2.is_empty:
        yield ()
        return
    dp1 = _down_paths(t1)
    dp2 = _down_paths(t2)
    by_child1: dict[int, dict[int, list]] = {v: {} for v in t1.nodes}
    for v, ps in dp1.items():
        for p in ps:
            by_child1[v].setdefault(p[1], []).append(p)
    by_child2: dict[int, dict[int, list]] = {v: {} for v in t2.nodes}
    for v, ps in dp2.items():
        for p in ps:
            by_child2[v].setdefault(p[1], []).append(p)

    sites = [(t1.root, t2.root)]
    acc: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def assign(i: int, matched, site_idx: int):
        # pick concrete paths for each matched child direction of one site
        if i == len(matched):
            yield from rec(site_idx + 1)
            return
        c1, c2 = matched[i]
        v1, v2 = sites[site_idx]
        for p1 in by_child1[v1][c1]:
            for p2 in by_child2[v2][c2]:
                acc.append((p1, p2))
                sites.append((p1[-1], p2[-1]))
                yield from assign(i + 1, matched, site_idx)
                sites.pop()
                acc.pop()

    def rec(site_idx: int):
        if site_idx == len(sites):
            yield tuple(acc)
            return
        v1, v2 = sites[site_idx]
        for matched in _matchings(list(t1.children[v1]), list(t2.children[v2])):
            yield from assign(0, matched, site_idx)

    yield from rec(0)


def enumerate_mappings(t1: MergeTree, t2: MergeTree):
    """Yield every valid path mapping between t1 and t2 exactly once."""
    _check_size(t1, t2)
    for raw in _raw_mappings(t1, t2):
        yield PathMapping(t1, t2, frozenset(raw))


def count_mappings(t1: MergeTree, t2: MergeTree) -> int:
    _check_size(t1, t2)
    return sum(1 for _ in _raw_mappings(t1, t2))


def brute_force_distance(t1: MergeTree, t2: MergeTree) -> float:
    """Minimum path mapping cost by exhaustive enumeration."""
    _check_size(t1, t2)
    tp1 = t1.total_persistence()
    tp2 = t2.total_persistence()
    if t1.is_empty or t2.is_empty:
        return tp1 + tp2
    up1 = _upsums(t1)
    up2 = _upsums(t2)
    best = math.inf
    for m in _raw_mappings(t1, t2):
        mapped1 = 0.0
        mapped2 = 0.0
        rel = 0.0
        for p1, p2 in m:
            l1 = up1[p1[-1]] - up1[p1[0]]
            l2 = up2[p2[-1]] - up2[p2[0]]
            mapped1 += l1
            mapped2 += l2
            rel += abs(l1 - l2)
        c = rel + (tp1 - mapped1) + (tp2 - mapped2)
        if c < best:
            best = c
    return best


def _upsums(t: MergeTree) -> dict[int, float]:
    up = {t.root: 0.0}
    stack = [t.root]
    while stack:
        v = stack.pop()
        for c in t.children[v]:
            up[c] = up[v] + t.label[c]
            stack.append(c)
    return up
