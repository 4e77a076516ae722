"""Densified array form of a merge tree, shared by both DP kernels.

Dense ids are assigned in sorted original-id order, children lists are
sorted ascending, and the cached sums are accumulated in one fixed order,
so every derived quantity is independent of the tree's storage order.
"""

from __future__ import annotations

from .tree import MergeTree


class TreeArrays:
    __slots__ = ("n", "root", "parent", "depth", "label", "subpers", "upsum",
                 "children", "offset", "nstates", "orig")

    def __init__(self, tree: MergeTree):
        orig = sorted(tree.nodes)
        dense = {o: i for i, o in enumerate(orig)}
        n = len(orig)
        self.n = n
        self.orig = orig
        self.root = dense[tree.root]
        self.parent = [-1] * n
        self.label = [0.0] * n
        self.children = [()] * n
        for o, i in dense.items():
            if o in tree.parent:
                self.parent[i] = dense[tree.parent[o]]
                self.label[i] = tree.label[o]
            self.children[i] = tuple(sorted(dense[c] for c in tree.children[o]))
        self.depth = [0] * n
        self.upsum = [0.0] * n
        order = []  # preorder
        stack = [self.root]
        while stack:
            v = stack.pop()
            order.append(v)
            for c in self.children[v]:
                self.depth[c] = self.depth[v] + 1
                self.upsum[c] = self.upsum[v] + self.label[c]
                stack.append(c)
        self.subpers = [0.0] * n
        for v in reversed(order):
            s = 0.0
            for c in self.children[v]:
                s = s + (self.label[c] + self.subpers[c])
            self.subpers[v] = s
        # state index: pending path (node, ancestor) -> offset[node] + depth[ancestor]
        self.offset = [0] * (n + 1)
        for i in range(n):
            self.offset[i + 1] = self.offset[i] + self.depth[i]
        self.nstates = self.offset[n]
