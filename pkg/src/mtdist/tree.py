"""Abstract merge trees: rooted unordered trees with positive edge labels.

The empty tree (a single node, no edges) is a valid special case. In every
other valid tree the root has exactly one child and every non-root inner
node has at least two.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from ._fmt import fmt_float


class ParseError(ValueError):
    """Raised for malformed .mt / .grid / .csv input."""


class MergeTree:
    """Immutable rooted tree; each edge (child, parent) carries a float label.

    Node ids are nonnegative integers, unique within the tree but carrying
    no meaning across trees. Children lists preserve construction order,
    but all semantics are unordered.
    """

    __slots__ = ("root", "parent", "children", "label", "_nodes")

    def __init__(self, edges: Iterable[tuple[int, int, float]] = (), root: int | None = None):
        parent: dict[int, int] = {}
        label: dict[int, float] = {}
        children: dict[int, list[int]] = {}
        nodes: set[int] = set()
        for c, p, lab in edges:
            c = int(c)
            p = int(p)
            if c in parent:
                raise ValueError(f"node {c} has two parents")
            if c == p:
                raise ValueError(f"self-loop at node {c}")
            parent[c] = p
            label[c] = float(lab)
            children.setdefault(p, []).append(c)
            children.setdefault(c, [])
            nodes.add(c)
            nodes.add(p)
        if nodes:
            roots = [n for n in nodes if n not in parent]
            if not roots:
                raise ValueError("no root: the edge set contains a cycle")
            if len(roots) > 1:
                raise ValueError(f"multiple roots: {sorted(roots)}")
            self.root = roots[0]
            # every node must hang off the root, otherwise a cycle floats free
            seen = set()
            stack = [self.root]
            while stack:
                n = stack.pop()
                seen.add(n)
                stack.extend(children[n])
            if seen != nodes:
                raise ValueError("disconnected edges or cycle present")
        else:
            self.root = 0 if root is None else int(root)
            children[self.root] = []
            nodes.add(self.root)
        self.parent = parent
        self.label = label
        self.children = children
        self._nodes = nodes

    # -- basic queries -------------------------------------------------

    @property
    def nodes(self) -> set[int]:
        return self._nodes

    @property
    def edge_count(self) -> int:
        return len(self.label)

    @property
    def is_empty(self) -> bool:
        return not self.label

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (child, parent), sorted by child id."""
        return [(c, self.parent[c]) for c in sorted(self.label)]

    def leaves(self) -> list[int]:
        return sorted(n for n in self._nodes if not self.children[n] and n != self.root)

    def is_leaf(self, n: int) -> bool:
        return n != self.root and not self.children[n]

    def depth(self, n: int) -> int:
        d = 0
        while n != self.root:
            n = self.parent[n]
            d += 1
        return d

    def has_edge(self, c: int, p: int) -> bool:
        return c in self.parent and self.parent[c] == p

    # -- spec operations ----------------------------------------------

    def validate(self) -> list[str]:
        """Return all merge tree invariant violations, [] if valid."""
        out = []
        if self.is_empty:
            return out
        rdeg = len(self.children[self.root])
        if rdeg != 1:
            out.append(f"root {self.root} has degree {rdeg}, expected one")
        for n in sorted(self._nodes):
            if n == self.root:
                continue
            k = len(self.children[n])
            if k == 1:
                out.append(f"inner node {n} has degree one")
        for c in sorted(self.label):
            lab = self.label[c]
            if not (lab > 0) or not math.isfinite(lab):
                out.append(f"edge ({c}, {self.parent[c]}) has nonpositive label {lab!r}")
        return out

    def subtree(self, edge: tuple[int, int]) -> "MergeTree":
        """The subtree rooted in edge (c, p): p, c and all descendants of c."""
        c, p = edge
        if not self.has_edge(c, p):
            raise ValueError(f"edge {edge} not in tree")
        es = [(c, p, self.label[c])]
        stack = [c]
        while stack:
            n = stack.pop()
            for ch in self.children[n]:
                es.append((ch, n, self.label[ch]))
                stack.append(ch)
        return MergeTree(es)

    def subtract(self, edge: tuple[int, int]) -> "MergeTree":
        """Remove the subtree hanging below edge (c, p), keeping p.

        If p is left with a single child, p is removed and its two incident
        edges merge with labels summed.
        """
        c, p = edge
        if not self.has_edge(c, p):
            raise ValueError(f"edge {edge} not in tree")
        if p == self.root:
            raise ValueError("cannot subtract the root edge")
        drop = set()
        stack = [c]
        while stack:
            n = stack.pop()
            drop.add(n)
            stack.extend(self.children[n])
        es = []
        for ch in sorted(self.label):
            if ch in drop or ch == c:
                continue
            es.append((ch, self.parent[ch], self.label[ch]))
        t = MergeTree(es, root=self.root)
        remaining = [x for x in self.children[p] if x not in drop]
        if len(remaining) == 1:
            # p became a degree-two pass-through; splice it out
            d = remaining[0]
            pp = self.parent[p]
            merged = self.label[p] + self.label[d]
            es2 = [(ch, (pp if par == p else par), lab) for ch, par, lab in
                   ((x, t.parent[x], t.label[x]) for x in sorted(t.label) if x != p and x != d)]
            es2.append((d, pp, merged))
            t = MergeTree(es2)
        return t

    def path_label(self, path: Sequence[int]) -> float:
        """Sum of edge labels along a monotone root-to-leaf-directed path."""
        if len(path) < 2:
            raise ValueError("a monotone path has at least two vertices")
        total = 0.0
        for up, down in zip(path, path[1:]):
            if not self.has_edge(down, up):
                raise ValueError(f"({down}, {up}) is not an edge of the tree")
            total += self.label[down]
        return total

    def total_persistence(self) -> float:
        return math.fsum(self.label.values())

    def canonical_form(self) -> str:
        """Order-independent encoding; equal strings iff isomorphic with equal labels."""
        if self.is_empty:
            return "()"

        def enc(c: int) -> str:
            parts = sorted(enc(g) for g in self.children[c])
            return "(" + fmt_float(self.label[c]) + ":" + "".join(parts) + ")"

        return enc(self.children[self.root][0])

    def with_children_order(self, order: dict[int, list[int]]) -> "MergeTree":
        """Copy with children storage order permuted (semantics unchanged)."""
        t = MergeTree.__new__(MergeTree)
        t.root = self.root
        t.parent = dict(self.parent)
        t.label = dict(self.label)
        t._nodes = set(self._nodes)
        ch = {}
        for n, lst in self.children.items():
            if n in order:
                if sorted(order[n]) != sorted(lst):
                    raise ValueError(f"order for node {n} is not a permutation")
                ch[n] = list(order[n])
            else:
                ch[n] = list(lst)
        t.children = ch
        return t

    def __eq__(self, other) -> bool:
        if not isinstance(other, MergeTree):
            return NotImplemented
        return (self.root == other.root and self.parent == other.parent
                and self.label == other.label)

    def __hash__(self):
        return hash((self.root, tuple(sorted(self.label.items()))))

    def __repr__(self):
        return f"MergeTree({self.edge_count} edges, root={self.root})"


EMPTY = MergeTree()


# -- .mt file format ---------------------------------------------------

MT_HEADER = "# mtree v1"


def parse_mt(text: str) -> MergeTree:
    """Parse the line-based .mt format. Raises ParseError on any defect."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != MT_HEADER:
        raise ParseError(f"missing header line {MT_HEADER!r}")
    edges = []
    seen = set()
    for i, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "e" or len(parts) != 4:
            raise ParseError(f"line {i}: expected 'e <child> <parent> <label>'")
        try:
            c = int(parts[1])
            p = int(parts[2])
            lab = float(parts[3])
        except ValueError as exc:
            raise ParseError(f"line {i}: {exc}") from None
        if c < 0 or p < 0:
            raise ParseError(f"line {i}: negative node id")
        if not math.isfinite(lab) or lab <= 0:
            raise ParseError(f"line {i}: label must be a positive finite number")
        if (c, p) in seen:
            raise ParseError(f"line {i}: duplicate edge ({c}, {p})")
        seen.add((c, p))
        edges.append((c, p, lab))
    try:
        t = MergeTree(edges)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    bad = t.validate()
    if bad:
        raise ParseError("; ".join(bad))
    return t


def write_mt(tree: MergeTree) -> str:
    out = [MT_HEADER]
    for c, p in tree.edges():
        out.append(f"e {c} {p} {fmt_float(tree.label[c])}")
    return "\n".join(out) + "\n"


def load_mt(path) -> MergeTree:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_mt(fh.read())


def save_mt(tree: MergeTree, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_mt(tree))
