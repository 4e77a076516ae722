"""Minimum-cost assignment between two children sets.

Each row may be matched to a column (paying cost[i][j]) or left unmatched
(paying delete_costs[i]); unmatched columns pay insert_costs[j]. Small
instances are solved by exhaustive enumeration in a fixed order so the
chosen matching is deterministic; larger ones go through a padded square
Hungarian solver.
"""

from __future__ import annotations

_ENUM_LIMIT = 3  # exhaustive up to 3x3; beyond that the Hungarian kernel


def child_assignment(cost, delete_costs, insert_costs):
    """Return (total, pairs) for the optimal row/column assignment.

    pairs is a list of matched (row, col) index pairs; rows and columns
    absent from it are charged their delete/insert cost.
    """
    k1 = len(delete_costs)
    k2 = len(insert_costs)
    if len(cost) != k1 or any(len(row) != k2 for row in cost):
        raise ValueError("cost matrix shape does not match delete/insert vectors")
    if k1 == 0:
        return sum_canonical((), insert_costs, ()), []
    if k2 == 0:
        return sum_canonical(delete_costs, (), ()), []
    if k1 <= _ENUM_LIMIT and k2 <= _ENUM_LIMIT:
        return _enumerate_small(k1, k2, cost, delete_costs, insert_costs)
    pairs = _hungarian(k1, k2, cost, delete_costs, insert_costs)
    return canonical_total(cost, delete_costs, insert_costs, pairs), pairs


def sum_canonical(dels, inss, matched):
    t = 0.0
    for v in matched:
        t = t + v
    for v in dels:
        t = t + v
    for v in inss:
        t = t + v
    return t


def canonical_total(cost, delete_costs, insert_costs, pairs):
    """Recompute a matching's total in one fixed order (matched by row
    ascending, then deletes, then inserts) so equal matchings always give
    bit-equal totals."""
    matched_rows = {i for i, _ in pairs}
    matched_cols = {j for _, j in pairs}
    return sum_canonical(
        (delete_costs[i] for i in range(len(delete_costs)) if i not in matched_rows),
        (insert_costs[j] for j in range(len(insert_costs)) if j not in matched_cols),
        (cost[i][j] for i, j in sorted(pairs)),
    )


def _enumerate_small(k1, k2, cost, dels, inss):
    # Depth-first over rows: delete the row first, then try each free
    # column in ascending order. Strict < keeps the first optimum, which
    # fixes the tie-break. The accumulation order here is mirrored
    # bit-for-bit by the compiled kernel.
    best_total = float("inf")
    best_pairs: list = []
    pairs: list = []

    def rec(i, used, acc):
        nonlocal best_total, best_pairs
        if i == k1:
            t = acc
            for j in range(k2):
                if not used & (1 << j):
                    t = t + inss[j]
            if t < best_total:
                best_total = t
                best_pairs = list(pairs)
            return
        rec(i + 1, used, acc + dels[i])
        row = cost[i]
        for j in range(k2):
            if not used & (1 << j):
                pairs.append((i, j))
                rec(i + 1, used | (1 << j), acc + row[j])
                pairs.pop()

    rec(0, 0, 0.0)
    return best_total, best_pairs


def _hungarian(k1, k2, cost, dels, inss):
    """Optimal pairs via a padded (k1+k2) square assignment problem.

    Layout: real rows then column-dummies; real columns then row-dummies.
    cell(i, j)          = cost[i][j]
    cell(i, k2+i)       = dels[i]        (row i unmatched)
    cell(k1+j, j)       = inss[j]        (column j unmatched)
    cell(k1+j, k2+i)    = 0              (dummy-dummy)
    """
    n = k1 + k2
    big = 1.0
    for row in cost:
        for v in row:
            big += v
    for v in dels:
        big += v
    for v in inss:
        big += v

    def cell(i, j):
        if i < k1 and j < k2:
            return cost[i][j]
        if i < k1:
            return dels[i] if j - k2 == i else big
        if j < k2:
            return inss[j] if i - k1 == j else big
        return 0.0

    # Jonker-Volgenant style shortest augmenting paths, O(n^3)
    INF = float("inf")
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    p = [n] * (n + 1)  # p[j] = row matched to column j (n = none)
    way = [0] * (n + 1)
    for i in range(n):
        p[n] = i
        j0 = n
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = -1
            for j in range(n):
                if used[j]:
                    continue
                cur = cell(i0, j) - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == n:
                break
        while j0 != n:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    return sorted((p[j], j) for j in range(k2) if p[j] < k1)
