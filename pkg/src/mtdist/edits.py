"""Edit operations on abstract merge trees.

Three primitives: relabel an edge, contract an edge (deletion), and the
inverse of a contraction (insertion). Contracting the edge below a parent
with exactly two children splices the parent out, summing the two incident
labels. Every operation costs |l1 - l2| with 0 standing in for a missing
label, so a contraction of an edge labeled l costs l.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tree import MergeTree


class EditError(ValueError):
    """Raised when an edit op is not applicable to the given tree."""


@dataclass(frozen=True)
class Relabel:
    edge: tuple[int, int]
    new_label: float


@dataclass(frozen=True)
class Contract:
    edge: tuple[int, int]


@dataclass(frozen=True)
class Uncontract:
    # Attach a new leaf edge with label leaf_label. If split_fraction is
    # None the leaf attaches directly at node `at`; otherwise the edge
    # (at, parent(at)) is first split at that fraction of its label (the
    # lower part keeps the fraction) and the leaf attaches to the new
    # intermediate node.
    at: int
    leaf_label: float
    split_fraction: float | None = None


EditOp = Relabel | Contract | Uncontract


def label_cost(l1: float, l2: float) -> float:
    """cost(l1, l2) = |l1 - l2|; use 0 for the blank side."""
    if l1 < 0 or l2 < 0:
        raise ValueError("labels are nonnegative")
    return abs(l1 - l2)


def op_cost(tree: MergeTree, op: EditOp) -> float:
    """Cost of applying op to tree (relabel cost needs the old label)."""
    if isinstance(op, Relabel):
        c, p = op.edge
        if not tree.has_edge(c, p):
            raise EditError(f"edge {op.edge} not in tree")
        return label_cost(tree.label[c], op.new_label)
    if isinstance(op, Contract):
        c, p = op.edge
        if not tree.has_edge(c, p):
            raise EditError(f"edge {op.edge} not in tree")
        return tree.label[c]
    if isinstance(op, Uncontract):
        return float(op.leaf_label)
    raise EditError(f"unknown op {op!r}")


def apply_edit(tree: MergeTree, op: EditOp) -> MergeTree:
    if isinstance(op, Relabel):
        return _relabel(tree, op)
    if isinstance(op, Contract):
        return _contract(tree, op)
    if isinstance(op, Uncontract):
        return _uncontract(tree, op)
    raise EditError(f"unknown op {op!r}")


def _relabel(tree: MergeTree, op: Relabel) -> MergeTree:
    c, p = op.edge
    if not tree.has_edge(c, p):
        raise EditError(f"edge {op.edge} not in tree")
    if not op.new_label > 0:
        raise EditError(f"relabel to nonpositive value {op.new_label!r}")
    es = [(ch, tree.parent[ch], op.new_label if ch == c else tree.label[ch])
          for ch in sorted(tree.label)]
    return MergeTree(es)


def _contract(tree: MergeTree, op: Contract) -> MergeTree:
    c, p = op.edge
    if not tree.has_edge(c, p):
        raise EditError(f"edge {op.edge} not in tree")
    # merge c into p: c's children re-parent to p, labels unchanged
    es = []
    for ch in sorted(tree.label):
        if ch == c:
            continue
        par = tree.parent[ch]
        es.append((ch, p if par == c else par, tree.label[ch]))
    t = MergeTree(es, root=tree.root)
    if p == tree.root:
        if t.children[p]:
            raise EditError("contracting the root edge must empty the tree")
        return t
    kids = t.children[p]
    if len(kids) == 1:
        # p dropped to degree two; splice it out, labels summed
        d = kids[0]
        pp = t.parent[p]
        merged = t.label[p] + t.label[d]
        es2 = [(ch, t.parent[ch], t.label[ch]) for ch in sorted(t.label)
               if ch != p and ch != d]
        es2.append((d, pp, merged))
        t = MergeTree(es2)
    return t


def _uncontract(tree: MergeTree, op: Uncontract) -> MergeTree:
    if op.at not in tree.nodes:
        raise EditError(f"node {op.at} not in tree")
    if not op.leaf_label > 0:
        raise EditError(f"new leaf label must be positive, got {op.leaf_label!r}")
    next_id = max(tree.nodes) + 1
    es = [(ch, tree.parent[ch], tree.label[ch]) for ch in sorted(tree.label)]
    if op.split_fraction is None:
        # plain attach; valid only at a saddle (>= 2 children) or at the
        # root of the empty tree
        k = len(tree.children[op.at])
        if op.at == tree.root:
            if k != 0:
                raise EditError("attaching at a nonempty root breaks root degree one")
        elif k < 2:
            raise EditError(f"attaching at node {op.at} ({k} children) yields an invalid tree")
        es.append((next_id, op.at, float(op.leaf_label)))
        return MergeTree(es)
    f = op.split_fraction
    if not (0.0 < f < 1.0):
        raise EditError(f"split fraction must be in (0,1), got {f!r}")
    if op.at == tree.root or op.at not in tree.parent:
        raise EditError("split target must be a non-root node")
    c = op.at
    p = tree.parent[c]
    lab = tree.label[c]
    lower = f * lab
    upper = lab - lower
    if not (lower > 0 and upper > 0):
        raise EditError("split produces a nonpositive label")
    mid = next_id
    leaf = next_id + 1
    es = [(ch, tree.parent[ch], tree.label[ch]) for ch in sorted(tree.label) if ch != c]
    es.append((c, mid, lower))
    es.append((mid, p, upper))
    es.append((leaf, mid, float(op.leaf_label)))
    return MergeTree(es)


def apply_sequence(tree: MergeTree, ops) -> MergeTree:
    t = tree
    for i, op in enumerate(ops):
        try:
            t = apply_edit(t, op)
        except EditError as exc:
            raise EditError(f"op {i}: {exc}") from None
    return t


def sequence_cost(tree: MergeTree, ops) -> float:
    """Total cost of the sequence, charging each op against its intermediate tree."""
    t = tree
    total = 0.0
    for i, op in enumerate(ops):
        try:
            total += op_cost(t, op)
            t = apply_edit(t, op)
        except EditError as exc:
            raise EditError(f"op {i}: {exc}") from None
    return total


def is_one_degree(tree: MergeTree, ops) -> bool:
    """True iff every contraction in the sequence targets a leaf edge.

    Insertions always create leaf edges, so only contractions can violate
    the one-degree restriction.
    """
    t = tree
    for op in ops:
        if isinstance(op, Contract):
            c, _ = op.edge
            if not t.has_edge(*op.edge) or not t.is_leaf(c):
                return False
        t = apply_edit(t, op)
    return True
