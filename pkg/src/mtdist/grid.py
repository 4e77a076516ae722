"""Merge trees of scalar fields sampled on regular grids.

The join tree tracks sub-level set components of the field: leaves are
local minima, saddles are where components merge, the root sits at the
global maximum. Edge labels are scalar value differences, so the tree
records the persistence of every feature. The split tree is the join
tree of the negated field.

Degeneracies (plateaus, constant fields, merges at the global maximum)
are resolved by dropping zero-persistence structure, with a warning
whenever that loses features a generic field would have kept.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from ._fmt import fmt_float
from .tree import MergeTree, ParseError

GRID_HEADER = "# grid v1"


def parse_grid(text: str) -> np.ndarray:
    """Parse the grid format: header, dims line, then rows of floats."""
    raw = text.splitlines()
    i = 0
    while i < len(raw) and not raw[i].strip():
        i += 1
    if i == len(raw) or raw[i].strip() != GRID_HEADER:
        raise ParseError(f"missing header line {GRID_HEADER!r}")
    lines = [ln.strip() for ln in raw[i + 1:]]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("dims"):
        raise ParseError("expected a 'dims <rows> <cols>' line")
    parts = lines[0].split()
    try:
        if len(parts) != 3:
            raise ValueError
        rows, cols = int(parts[1]), int(parts[2])
    except ValueError:
        raise ParseError(f"bad dims line: {lines[0]!r}") from None
    if rows <= 0 or cols <= 0:
        raise ParseError(f"dims must be positive, got {rows} x {cols}")
    body = lines[1:]
    if len(body) != rows:
        raise ParseError(f"expected {rows} data rows, found {len(body)}")
    data = np.empty((rows, cols), dtype=np.float64)
    for i, ln in enumerate(body):
        vals = ln.split()
        if len(vals) != cols:
            raise ParseError(f"row {i} has {len(vals)} values, expected {cols}")
        for j, tok in enumerate(vals):
            try:
                x = float(tok)
            except ValueError as exc:
                raise ParseError(f"bad value {tok!r} in row {i}") from exc
            if not math.isfinite(x):
                raise ParseError(f"non-finite value {tok!r} in row {i}")
            data[i, j] = x
    return data


def write_grid(field) -> str:
    a = _as_field(field)
    out = [GRID_HEADER, f"dims {a.shape[0]} {a.shape[1]}"]
    for row in a:
        out.append(" ".join(fmt_float(x) for x in row))
    return "\n".join(out) + "\n"


def load_grid(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_grid(fh.read())


def save_grid(field, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_grid(field))


def _as_field(field) -> np.ndarray:
    a = np.asarray(field, dtype=np.float64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("field must be a non-empty 2d array")
    if not np.all(np.isfinite(a)):
        raise ValueError("field contains non-finite values")
    return a


def _neighbors(rows, cols, connectivity):
    if connectivity == 4:
        deltas = ((-1, 0), (1, 0), (0, -1), (0, 1))
    elif connectivity == 8:
        deltas = ((-1, -1), (-1, 0), (-1, 1), (0, -1),
                  (0, 1), (1, -1), (1, 0), (1, 1))
    else:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")

    def nb(idx):
        r, c = divmod(idx, cols)
        for dr, dc in deltas:
            rr, cc = r + dr, c + dc
            if 0 <= rr < rows and 0 <= cc < cols:
                yield rr * cols + cc
    return nb


class _UF:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        # b's root wins
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb
        return rb


def compute_join_tree(field, connectivity: int = 4) -> MergeTree:
    """Join tree of the field by an ascending union-find sweep.

    Ties in value are broken by linear index, which fixes a total order.
    Zero-persistence structure arising from ties is dropped: flat leaves
    vanish, flat saddle chains collapse into multi-saddles. Returns the
    empty tree (with a warning) when no feature survives, e.g. for a
    constant field.
    """
    a = _as_field(field)
    rows, cols = a.shape
    flat = a.ravel()
    nb = _neighbors(rows, cols, connectivity)
    order = sorted(range(rows * cols), key=lambda i: (flat[i], i))
    uf = _UF(rows * cols)
    comp_node: dict[int, int] = {}

    node_value: list[float] = []
    node_children: list[list[tuple[int, float]]] = []

    def new_node(value) -> int:
        node_value.append(float(value))
        node_children.append([])
        return len(node_value) - 1

    seen = [False] * (rows * cols)
    for v in order:
        merged: list[int] = []
        for u in nb(v):
            if not seen[u]:
                continue
            r = uf.find(u)
            if r not in merged:
                merged.append(r)
        seen[v] = True
        if not merged:
            comp_node[v] = new_node(flat[v])
            continue
        reps = [comp_node.pop(r) for r in merged]
        root = v
        for r in merged:
            root = uf.union(r, root)
        if len(reps) == 1:
            comp_node[root] = reps[0]
            continue
        val = flat[v]
        children: list[tuple[int, float]] = []
        for u in reps:
            lab = float(val - node_value[u])
            if lab == 0.0:
                if node_children[u]:
                    # flat merge with a saddle: absorb into a multi-saddle
                    children.extend(node_children[u])
                # a flat leaf is a zero-persistence feature, drop it
                continue
            children.append((u, lab))
        if len(children) == 0:
            comp_node[root] = new_node(val)
        elif len(children) == 1:
            comp_node[root] = children[0][0]
        else:
            node = new_node(val)
            node_children[node] = children
            comp_node[root] = node

    top = comp_node[uf.find(order[-1])]
    val_max = flat[order[-1]]
    root_label = float(val_max - node_value[top])
    if root_label == 0.0:
        if not node_children[top]:
            warnings.warn("field has no positive-persistence features; "
                          "returning the empty tree")
            return MergeTree()
        # merge at the global maximum: keep the trunk reaching the
        # deepest minimum, drop the other branches
        def subtree_min(u):
            lo = node_value[u]
            stack = [u]
            while stack:
                w = stack.pop()
                lo = min(lo, node_value[w])
                stack.extend(c for c, _ in node_children[w])
            return lo

        kids = node_children[top]
        keep = min(kids, key=lambda cl: (subtree_min(cl[0]), cl[0]))
        dropped = len(kids) - 1
        warnings.warn(f"merge at the global maximum: dropped {dropped} "
                      f"branch{'es' if dropped != 1 else ''}")
        top, root_label = keep
    root = new_node(val_max)
    node_children[root] = [(top, root_label)]

    # collect reachable nodes, renumber densely in creation order
    alive = []
    stack = [root]
    while stack:
        u = stack.pop()
        alive.append(u)
        stack.extend(c for c, _ in node_children[u])
    remap = {u: i for i, u in enumerate(sorted(alive))}
    edges = []
    for u in alive:
        for c, lab in node_children[u]:
            edges.append((remap[c], remap[u], lab))
    return MergeTree(edges)


def compute_split_tree(field, connectivity: int = 4) -> MergeTree:
    """Split tree: tracks super-level set components (maxima as leaves)."""
    return compute_join_tree(-_as_field(field), connectivity)


def simplify(tree: MergeTree, epsilon: float, relative: bool = False) -> MergeTree:
    """Contract leaf edges with label below epsilon, smallest first.

    With relative=True, epsilon is taken as a fraction of the largest
    root-to-leaf label sum of the input tree. The last remaining edge is
    never removed, so a non-empty tree stays non-empty.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    if tree.is_empty:
        return tree
    eps = epsilon
    if relative:
        down = {tree.root: 0.0}
        deepest = 0.0
        stack = [tree.root]
        while stack:
            v = stack.pop()
            for c in tree.children[v]:
                down[c] = down[v] + tree.label[c]
                deepest = max(deepest, down[c])
                stack.append(c)
        eps = epsilon * deepest
    t = tree
    while t.edge_count > 1:
        cands = [(t.label[c], c) for c in t.leaves() if t.label[c] < eps]
        if not cands:
            break
        _, c = min(cands)
        t = t.subtract((c, t.parent[c]))
    return t
