"""Path mapping distance: top level entry points and mapping machinery.

distance() runs the DP over pending-path states (compiled kernel when
available); distance_with_mapping() additionally walks the traceback and
returns an optimal path mapping. The mapping side of the module checks
the three path mapping conditions, prices mappings, normalizes them by
merging consecutive pairs, and converts a mapping into an explicit edit
sequence whose cost telescopes to the mapping cost.
"""

from __future__ import annotations

import sys
from contextlib import contextmanager
from dataclasses import dataclass

from .tree import MergeTree
from .edits import Relabel, Contract, Uncontract
from ._prep import TreeArrays
from . import _backend
from . import _dp_py
from ._fmt import fmt_float

Path = tuple[int, ...]
Pair = tuple[Path, Path]


@dataclass(frozen=True)
class PathMapping:
    """A set of (T1 path, T2 path) pairs; paths run top-down."""
    t1: MergeTree
    t2: MergeTree
    pairs: frozenset[Pair]

    def mapped_edges(self, side: int) -> set[int]:
        """Child ids of edges covered by mapped paths on the given side (1 or 2)."""
        out: set[int] = set()
        for pr in self.pairs:
            out.update(pr[side - 1][1:])
        return out


def _check_tree(t: MergeTree, name: str) -> None:
    bad = t.validate()
    if bad:
        raise ValueError(f"{name} is not a valid merge tree: " + "; ".join(bad))


@contextmanager
def _deep_recursion(n: int):
    # the pure-python DP recurses about twice the combined node count deep
    want = 4 * n + 2000
    old = sys.getrecursionlimit()
    if old < want:
        sys.setrecursionlimit(want)
    try:
        yield
    finally:
        if old < want:
            sys.setrecursionlimit(old)


def distance(t1: MergeTree, t2: MergeTree) -> float:
    """The one-degree (path mapping) edit distance between two merge trees."""
    _check_tree(t1, "first tree")
    _check_tree(t2, "second tree")
    if t1.is_empty and t2.is_empty:
        return 0.0
    if t1.is_empty:
        return t2.total_persistence()
    if t2.is_empty:
        return t1.total_persistence()
    # fix the computation orientation so both argument orders run the
    # identical float arithmetic and the result is bit-for-bit symmetric
    if t2.canonical_form() < t1.canonical_form():
        t1, t2 = t2, t1
    a1 = TreeArrays(t1)
    a2 = TreeArrays(t2)
    with _deep_recursion(a1.n + a2.n):
        return _backend.distance_arrays(a1, a2)


def distance_with_mapping(t1: MergeTree, t2: MergeTree) -> tuple[float, PathMapping]:
    """Distance plus an optimal path mapping recovered by traceback."""
    _check_tree(t1, "first tree")
    _check_tree(t2, "second tree")
    if t1.is_empty or t2.is_empty:
        d = t2.total_persistence() if t1.is_empty else t1.total_persistence()
        return d, PathMapping(t1, t2, frozenset())
    a1 = TreeArrays(t1)
    a2 = TreeArrays(t2)
    with _deep_recursion(a1.n + a2.n):
        value, tags = _dp_py.distance_arrays(a1, a2, want_tags=True)
        pairs = _dp_py.traceback(a1, a2, tags)
    return value, PathMapping(t1, t2, frozenset(pairs))


# -- mapping validation and cost --------------------------------------


def _path_ok(t: MergeTree, path: Path) -> str | None:
    if len(path) < 2:
        return f"path {path} has fewer than two vertices"
    for up, down in zip(path, path[1:]):
        if not t.has_edge(down, up):
            return f"path {path}: ({down}, {up}) is not an edge"
    return None


def validate_mapping(m: PathMapping) -> list[str]:
    """All violations of the path mapping conditions; [] means valid."""
    out = []
    pairs = sorted(m.pairs)
    for p, q in pairs:
        for side, (t, pth) in enumerate(((m.t1, p), (m.t2, q)), start=1):
            err = _path_ok(t, pth)
            if err:
                out.append(f"side {side}: {err}")
    if out:
        return out
    # condition 1: one-to-one
    seen1: dict[Path, Path] = {}
    seen2: dict[Path, Path] = {}
    for p, q in pairs:
        if p in seen1 and seen1[p] != q:
            out.append(f"condition 1: path {p} mapped twice")
        if q in seen2 and seen2[q] != p:
            out.append(f"condition 1: path {q} mapped twice")
        seen1[p] = q
        seen2[q] = p
    # condition 2: same-tree paths share at most one vertex
    for side in (0, 1):
        paths = [pr[side] for pr in pairs]
        for i in range(len(paths)):
            si = set(paths[i])
            for j in range(i + 1, len(paths)):
                if len(si.intersection(paths[j])) > 1:
                    out.append(
                        f"condition 2: paths {paths[i]} and {paths[j]} share an edge")
    # condition 3: every pair continues another pair on both sides, or roots
    ends = {(p[-1], q[-1]) for p, q in pairs}
    for p, q in pairs:
        if p[0] == m.t1.root and q[0] == m.t2.root:
            continue
        if (p[0], q[0]) not in ends:
            out.append(f"condition 3: pair ({p}, {q}) continues no mapped pair")
    return out


def _require_valid(m: PathMapping) -> None:
    bad = validate_mapping(m)
    if bad:
        raise ValueError("invalid mapping: " + "; ".join(bad))


def mapping_cost(m: PathMapping) -> float:
    """Relabel costs of mapped pairs plus labels of unmapped edges on both sides."""
    _require_valid(m)
    total = 0.0
    for p, q in sorted(m.pairs):
        total += abs(m.t1.path_label(p) - m.t2.path_label(q))
    mapped1 = m.mapped_edges(1)
    mapped2 = m.mapped_edges(2)
    for c in sorted(m.t1.label):
        if c not in mapped1:
            total += m.t1.label[c]
    for c in sorted(m.t2.label):
        if c not in mapped2:
            total += m.t2.label[c]
    return total


def normalize_mapping(m: PathMapping) -> PathMapping:
    """Merge consecutive mapped pairs until the branching property holds.

    A pair followed at its end by exactly one continuing pair (on both
    sides, with nothing else starting at either junction) merges with it;
    the merged relabel never costs more than the two it replaces.
    """
    _require_valid(m)
    pairs = set(m.pairs)
    while True:
        merged = False
        for p1, q1 in sorted(pairs):
            at1 = [pr for pr in pairs if pr[0][0] == p1[-1]]
            at2 = [pr for pr in pairs if pr[1][0] == q1[-1]]
            if len(at1) == 1 and len(at2) == 1 and at1[0] == at2[0]:
                p2, q2 = at1[0]
                pairs.remove((p1, q1))
                pairs.remove((p2, q2))
                pairs.add((p1 + p2[1:], q1 + q2[1:]))
                merged = True
                break
        if not merged:
            return PathMapping(m.t1, m.t2, frozenset(pairs))


# -- mapping -> edit sequence -----------------------------------------


def _delete_unmapped(t: MergeTree, mapped: set[int], pair_of_edge: dict[int, Pair]):
    """Contract away every unmapped edge, deepest leaf edges first.

    Returns (final tree, applied ops, op context records, chain map,
    site aliases). A splice that would swallow a mapped edge into an
    unmapped one is followed by a relabel stripping the unmapped label,
    and the surviving leaf becomes the alias of the vanished path end.
    chain maps each surviving edge (by child id) to its mapped pairs,
    top-down.
    """
    from .edits import apply_edit

    w = t
    mapped = set(mapped)
    ops: list = []
    recs: list = []
    chain: dict[int, list[Pair]] = {}
    for c in t.label:
        chain[c] = [pair_of_edge[c]] if c in mapped else []
    alias: dict[int, int] = {}
    while True:
        cands = [c for c in w.label if w.is_leaf(c) and c not in mapped]
        if not cands:
            break
        cands.sort(key=lambda c: (-w.depth(c), c))
        c = cands[0]
        q = w.parent[c]
        lab_c = w.label[c]
        splice = q != w.root and len(w.children[q]) == 2
        if splice:
            s = next(x for x in w.children[q] if x != c)
            lab_s = w.label[s]
            lab_q = w.label[q]
            q_mapped = q in mapped
            s_mapped = s in mapped
        op = Contract((c, q))
        w = apply_edit(w, op)
        ops.append(op)
        if not splice:
            recs.append(("plain", c, q, lab_c))
            chain.pop(c, None)
            continue
        qq = w.parent[s]
        recs.append(("splice", c, q, lab_c, s, qq, lab_s, lab_q))
        chain[s] = chain[q] + chain[s]
        chain.pop(c, None)
        chain.pop(q, None)
        if q_mapped and not s_mapped:
            # the merged edge holds a mapped tail; strip the unmapped part
            op2 = Relabel((s, qq), lab_q)
            w = apply_edit(w, op2)
            ops.append(op2)
            recs.append(("strip", s, qq, lab_s + lab_q, lab_q))
            mapped.add(s)
            alias[q] = s
    return w, ops, recs, chain, alias


def _compress(chain: list[Pair]) -> list[Pair]:
    out: list[Pair] = []
    for pr in chain:
        if not out or out[-1] != pr:
            out.append(pr)
    return out


def mapping_to_edit_sequence(m: PathMapping) -> list:
    """An edit sequence taking t1 to t2 whose cost equals the mapping cost.

    Deletions of unmapped t1 subtrees, then per-pair relabels, then
    insertions rebuilding the unmapped t2 subtrees (the reversed inverses
    of deleting them), then exact label fixups costing at most a few ulps.
    """
    from .edits import apply_edit

    _require_valid(m)
    t1, t2 = m.t1, m.t2
    pair_of_1: dict[int, Pair] = {}
    pair_of_2: dict[int, Pair] = {}
    for pr in sorted(m.pairs):
        p, q = pr
        for c in p[1:]:
            pair_of_1[c] = pr
        for c in q[1:]:
            pair_of_2[c] = pr
    ops: list = []

    # phase 1: delete unmapped t1 edges
    w, dops, _, chain1, _ = _delete_unmapped(t1, set(pair_of_1), pair_of_1)
    ops.extend(dops)

    # phase 2: per-pair relabels turning each surviving chain into its target
    for d in sorted(chain1):
        if d not in w.label:
            continue
        cur = w.label[d]
        for pr in _compress(chain1[d]):
            p, q = pr
            nxt = (cur - t1.path_label(p)) + t2.path_label(q)
            if nxt != cur:
                op = Relabel((d, w.parent[d]), nxt)
                w = apply_edit(w, op)
                ops.append(op)
                cur = nxt

    # phase 3: simulate deleting unmapped t2 edges, then replay the
    # inverses in reverse to grow the unmapped t2 subtrees inside w
    w2, _, recs2, chain2, _ = _delete_unmapped(t2, set(pair_of_2), pair_of_2)
    corr: dict[int, int] = {w2.root: w.root}
    stack = [w2.root]
    while stack:
        u2 = stack.pop()
        v1 = corr[u2]
        kids1 = {_compress(chain1[d])[0]: d for d in w.children[v1]}
        for d2 in w2.children[u2]:
            first = _compress(chain2[d2])[0]
            if first not in kids1:
                raise AssertionError("mapping chains do not correspond")
            corr[d2] = kids1[first]
            stack.append(d2)

    for rec in reversed(recs2):
        if rec[0] == "plain":
            _, c, q, lab_c = rec
            op = Uncontract(at=corr[q], leaf_label=lab_c)
            new_leaf = max(w.nodes) + 1
            w = apply_edit(w, op)
            ops.append(op)
            corr[c] = new_leaf
        elif rec[0] == "splice":
            _, c, q, lab_c, s, qq, lab_s, lab_q = rec
            f = lab_s / (lab_s + lab_q)
            mid = max(w.nodes) + 1
            leaf = mid + 1
            op = Uncontract(at=corr[s], leaf_label=lab_c, split_fraction=f)
            w = apply_edit(w, op)
            ops.append(op)
            corr[q] = mid
            corr[c] = leaf
        else:  # strip: inverse re-fattens the edge before its splice is undone
            _, s, qq, lab_merged, lab_q = rec
            op = Relabel((corr[s], w.parent[corr[s]]), lab_merged)
            w = apply_edit(w, op)
            ops.append(op)

    # phase 4: exact label fixups (float dust from merged sums and splits)
    for c2 in sorted(t2.label):
        d = corr[c2]
        target = t2.label[c2]
        if w.label[d] != target:
            op = Relabel((d, w.parent[d]), target)
            w = apply_edit(w, op)
            ops.append(op)
    return ops


# -- .pmap output ------------------------------------------------------


def write_pmap(m: PathMapping, total: float) -> str:
    lines = []
    for p, q in sorted(m.pairs):
        c = abs(m.t1.path_label(p) - m.t2.path_label(q))
        lines.append("map %s %s %s" % (",".join(map(str, p)), ",".join(map(str, q)),
                                       fmt_float(c)))
    mapped1 = m.mapped_edges(1)
    mapped2 = m.mapped_edges(2)
    for c in sorted(m.t1.label):
        if c not in mapped1:
            lines.append(f"del {c} {m.t1.parent[c]}")
    for c in sorted(m.t2.label):
        if c not in mapped2:
            lines.append(f"ins {c} {m.t2.parent[c]}")
    lines.append(f"total {fmt_float(total)}")
    return "\n".join(lines) + "\n"
