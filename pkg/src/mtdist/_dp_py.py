"""Pure-Python DP kernel for the path mapping distance.

State (n1, p1, n2, p2): a pending path on each side running from a strict
ancestor p to the active node n. Case analysis per the recursion: pending
paths on leaves terminate with a relabel; an empty side charges the whole
pending path plus everything below; inner nodes either extend one side's
pending path past a child (dropping the sibling subtrees) or terminate
both paths and match the two children sets.

The compiled kernel in _dp_cy mirrors this file's arithmetic operation
order exactly; any change here must be reflected there.
"""

from __future__ import annotations

from .assignment import child_assignment
from ._prep import TreeArrays


def distance_arrays(a1: TreeArrays, a2: TreeArrays, want_tags: bool = False):
    """delta_1 between two non-empty trees given as TreeArrays.

    Returns (value, tags); tags is None unless want_tags, else a dict
    keyed by state with the traceback choice made there.
    """
    memo: dict = {}
    tags: dict | None = {} if want_tags else None
    ch1 = a1.children
    ch2 = a2.children
    lab1 = a1.label
    lab2 = a2.label
    sp1 = a1.subpers
    sp2 = a2.subpers
    up1 = a1.upsum
    up2 = a2.upsum

    def pd(n1, p1, n2, p2):
        key = (n1, p1, n2, p2)
        v = memo.get(key)
        if v is not None:
            return v
        c1s = ch1[n1]
        c2s = ch2[n2]
        pl1 = up1[n1] - up1[p1]
        pl2 = up2[n2] - up2[p2]
        if not c1s and not c2s:
            v = abs(pl1 - pl2)
            tag = ("LL",)
        elif not c1s:
            v = float("inf")
            pick = -1
            for c2 in c2s:
                cand = (sp2[n2] - lab2[c2] - sp2[c2]) + pd(n1, p1, c2, p2)
                if cand < v:
                    v = cand
                    pick = c2
            tag = ("E2", pick)
        elif not c2s:
            v = float("inf")
            pick = -1
            for c1 in c1s:
                cand = (sp1[n1] - lab1[c1] - sp1[c1]) + pd(c1, p1, n2, p2)
                if cand < v:
                    v = cand
                    pick = c1
            tag = ("E1", pick)
        else:
            d1 = float("inf")
            pick1 = -1
            for c1 in c1s:
                cand = (sp1[n1] - lab1[c1] - sp1[c1]) + pd(c1, p1, n2, p2)
                if cand < d1:
                    d1 = cand
                    pick1 = c1
            d2 = float("inf")
            pick2 = -1
            for c2 in c2s:
                cand = (sp2[n2] - lab2[c2] - sp2[c2]) + pd(n1, p1, c2, p2)
                if cand < d2:
                    d2 = cand
                    pick2 = c2
            cost = [[pd(c1, n1, c2, n2) for c2 in c2s] for c1 in c1s]
            dels = [lab1[c1] + sp1[c1] for c1 in c1s]
            inss = [lab2[c2] + sp2[c2] for c2 in c2s]
            mtotal, mpairs = child_assignment(cost, dels, inss)
            d3 = abs(pl1 - pl2) + mtotal
            v = d3
            tag = ("D3", tuple((c1s[i], c2s[j]) for i, j in mpairs))
            if d1 < v:
                v = d1
                tag = ("D1", pick1)
            if d2 < v:
                v = d2
                tag = ("D2", pick2)
        memo[key] = v
        if tags is not None:
            tags[key] = tag
        return v

    r1 = a1.root
    r2 = a2.root
    value = pd(ch1[r1][0], r1, ch2[r2][0], r2)
    return value, tags


def traceback(a1: TreeArrays, a2: TreeArrays, tags: dict):
    """Mapped path pairs (in original node ids) from a tags table."""
    o1 = a1.orig
    o2 = a2.orig
    par1 = a1.parent
    par2 = a2.parent

    def path(par, orig, p, n):
        out = [orig[n]]
        while n != p:
            n = par[n]
            out.append(orig[n])
        out.reverse()
        return tuple(out)

    pairs = []
    stack = [(a1.children[a1.root][0], a1.root, a2.children[a2.root][0], a2.root)]
    while stack:
        n1, p1, n2, p2 = stack.pop()
        tag = tags[(n1, p1, n2, p2)]
        kind = tag[0]
        if kind == "LL":
            pairs.append((path(par1, o1, p1, n1), path(par2, o2, p2, n2)))
        elif kind == "E1" or kind == "D1":
            stack.append((tag[1], p1, n2, p2))
        elif kind == "E2" or kind == "D2":
            stack.append((n1, p1, tag[1], p2))
        else:  # D3
            pairs.append((path(par1, o1, p1, n1), path(par2, o2, p2, n2)))
            for c1, c2 in tag[1]:
                stack.append((c1, n1, c2, n2))
    return pairs
