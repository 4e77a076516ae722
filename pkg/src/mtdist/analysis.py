"""Ensemble analysis over merge trees.

Distance matrices, average-linkage clustering, outlier scores and lag
profiles, plus CSV/SVG export and the seeded synthetic field
generators for the outlier and periodicity experiments.

Matrices are plain lists of row lists so CSV round trips are bit
exact.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ._fmt import fmt_float
from .distance import distance
from .tree import ParseError

Matrix = list


def validate_matrix(matrix) -> None:
    n = len(matrix)
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise ValueError(f"row {i} has length {len(row)}, expected {n}")
        for j, x in enumerate(row):
            if not math.isfinite(x):
                raise ValueError(f"non-finite entry at ({i}, {j})")
            if x < 0:
                raise ValueError(f"negative entry at ({i}, {j})")
        if row[i] != 0:
            raise ValueError(f"nonzero diagonal at ({i}, {i})")
    for i in range(n):
        for j in range(i):
            if matrix[i][j] != matrix[j][i]:
                raise ValueError(f"asymmetric entries at ({i}, {j})")


def _pair_distance(args):
    t1, t2 = args
    return distance(t1, t2)


def distance_matrix(trees, workers: int = 1) -> Matrix:
    """Symmetric pairwise distance matrix, one evaluation per pair.

    The result is independent of workers and of scheduling: pairs are
    placed by index, not by completion order.
    """
    trees = list(trees)
    for i, t in enumerate(trees):
        problems = t.validate()
        if problems:
            raise ValueError(f"tree {i}: {problems[0]}")
    n = len(trees)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    m = [[0.0] * n for _ in range(n)]
    if workers > 1 and len(pairs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunk = max(1, len(pairs) // (workers * 8))
            results = list(ex.map(_pair_distance,
                                  [(trees[i], trees[j]) for i, j in pairs],
                                  chunksize=chunk))
    else:
        results = [distance(trees[i], trees[j]) for i, j in pairs]
    for (i, j), d in zip(pairs, results):
        m[i][j] = d
        m[j][i] = d
    return m


def average_linkage(matrix) -> list[tuple[int, int, float, int]]:
    """Agglomerative clustering, unweighted pair-group mean linkage.

    Returns n-1 merges (a, b, height, new_id); new cluster ids count
    up from n. Ties go to the smallest (a, b) pair.
    """
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    validate_matrix(matrix)
    sizes = {i: 1 for i in range(n)}
    dist: dict[tuple[int, int], float] = {}
    for i in range(n):
        for j in range(i + 1, n):
            dist[(i, j)] = matrix[i][j]
    active = set(range(n))
    merges = []
    next_id = n
    while len(active) > 1:
        best = min(dist.items(), key=lambda kv: (kv[1], kv[0]))
        (a, b), h = best
        merges.append((a, b, h, next_id))
        active.discard(a)
        active.discard(b)
        for k in sorted(active):
            ka = (min(a, k), max(a, k))
            kb = (min(b, k), max(b, k))
            nd = (sizes[a] * dist.pop(ka) + sizes[b] * dist.pop(kb)) \
                / (sizes[a] + sizes[b])
            dist[(k, next_id)] = nd
        del dist[(a, b)]
        sizes[next_id] = sizes[a] + sizes[b]
        active.add(next_id)
        next_id += 1
    return merges


def dendrogram_text(merges) -> str:
    lines = [f"merge {a} {b} {fmt_float(h)} -> {nid}"
             for a, b, h, nid in merges]
    return "\n".join(lines) + ("\n" if lines else "")


def outlier_scores(matrix) -> list[float]:
    """Mean distance to all other members, per member."""
    validate_matrix(matrix)
    n = len(matrix)
    if n <= 1:
        return [0.0] * n
    return [sum(row) / (n - 1) for row in matrix]


def lag_profile(matrix) -> list[tuple[int, float]]:
    """Mean distance at each lag 1..n-1 along the member order."""
    validate_matrix(matrix)
    n = len(matrix)
    if n < 2:
        raise ValueError("need at least two members for a lag profile")
    out = []
    for lag in range(1, n):
        vals = [matrix[i][i + lag] for i in range(n - lag)]
        out.append((lag, sum(vals) / len(vals)))
    return out


def matrix_to_csv(matrix) -> str:
    return "\n".join(",".join(fmt_float(x) for x in row)
                     for row in matrix) + "\n"


def parse_matrix_csv(text: str) -> Matrix:
    rows = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        try:
            rows.append([float(tok) for tok in ln.split(",")])
        except ValueError as exc:
            raise ParseError(f"bad matrix row: {ln!r}") from exc
    if not rows:
        raise ParseError("empty matrix file")
    n = len(rows)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ParseError(f"matrix is not square: row {i} has {len(row)} "
                             f"entries, expected {n}")
    return rows


def matrix_to_svg(matrix, cell: int = 10) -> str:
    """n x n grayscale heatmap, white at 0, black at the maximum."""
    n = len(matrix)
    top = max((x for row in matrix for x in row), default=0.0)
    side = n * cell
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{side}" '
           f'height="{side}" viewBox="0 0 {side} {side}">']
    for i, row in enumerate(matrix):
        for j, x in enumerate(row):
            k = 255 if top == 0 else round(255 * (1 - x / top))
            out.append(f'<rect x="{j * cell}" y="{i * cell}" '
                       f'width="{cell}" height="{cell}" '
                       f'fill="rgb({k},{k},{k})"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export_matrix(matrix, format: str, path) -> None:
    validate_matrix(matrix)
    if format == "csv":
        text = matrix_to_csv(matrix)
    elif format == "svg":
        text = matrix_to_svg(matrix)
    else:
        raise ValueError(f"unknown format {format!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def profile_to_csv(profile) -> str:
    return "\n".join(f"{lag},{fmt_float(mean)}" for lag, mean in profile) + "\n"


# ---------------------------------------------------------------------------
# synthetic experiment generators


def _bump_field(shape, bumps):
    rows, cols = shape
    yy, xx = np.mgrid[0:rows, 0:cols]
    field = np.zeros(shape, dtype=np.float64)
    for cy, cx, amp, sigma in bumps:
        field += amp * np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2)
                              / (2.0 * sigma * sigma))
    return field


def outlier_ensemble(n_members: int = 20, shape=(64, 64), seed: int = 0):
    """Fields sharing a bump layout, one member with extra structure.

    Returns (fields, outlier_index). Siblings jitter the amplitudes of
    five shared bumps by up to 15 percent; the outlier additionally
    carries three bumps of its own, a structural difference no
    amplitude jitter can mimic.
    """
    if n_members < 2:
        raise ValueError("need at least two members")
    rng = np.random.default_rng(seed)
    rows, cols = shape
    base = [(rng.uniform(0.15, 0.85) * rows, rng.uniform(0.15, 0.85) * cols,
             1.0, 0.09 * min(rows, cols)) for _ in range(5)]
    extra = [(rng.uniform(0.15, 0.85) * rows, rng.uniform(0.15, 0.85) * cols,
              0.8, 0.08 * min(rows, cols)) for _ in range(3)]
    outlier_index = int(rng.integers(n_members))
    fields = []
    for i in range(n_members):
        jit = rng.uniform(-0.15, 0.15, size=len(base))
        bumps = [(cy, cx, amp * (1.0 + jit[k]), s)
                 for k, (cy, cx, amp, s) in enumerate(base)]
        if i == outlier_index:
            bumps += extra
        fields.append(_bump_field(shape, bumps))
    return fields, outlier_index


def periodic_series(n_steps: int = 60, period: int = 12, shape=(64, 64),
                    seed: int = 0):
    """A bump orbiting the grid center beside a static one.

    The orbit angle and the moving bump's amplitude depend on the step
    only through step mod period, plus a slow amplitude drift that
    keeps repeats from being bit-identical, so the smallest repeat lag
    stands out uniquely in a lag profile.
    """
    if n_steps < 2 or period < 1:
        raise ValueError("need n_steps >= 2 and period >= 1")
    rng = np.random.default_rng(seed)
    rows, cols = shape
    static = (rng.uniform(0.2, 0.35) * rows, rng.uniform(0.2, 0.35) * cols,
              0.9, 0.08 * min(rows, cols))
    radius = 0.27 * min(rows, cols)
    fields = []
    for t in range(n_steps):
        phase = 2.0 * math.pi * (t % period) / period
        cy = rows / 2.0 + radius * math.sin(phase)
        cx = cols / 2.0 + radius * math.cos(phase)
        amp = 1.0 + 0.35 * math.sin(phase) + 0.002 * t
        fields.append(_bump_field(shape, [static,
                                          (cy, cx, amp, 0.08 * min(rows, cols))]))
    return fields
