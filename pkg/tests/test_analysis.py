"""Distance matrices, clustering, outlier scores, lag profiles, exports."""

import math

import pytest

from mtdist import MergeTree, ParseError
from mtdist.analysis import (
    average_linkage,
    dendrogram_text,
    distance_matrix,
    lag_profile,
    matrix_to_csv,
    matrix_to_svg,
    outlier_ensemble,
    outlier_scores,
    parse_matrix_csv,
    periodic_series,
    profile_to_csv,
    validate_matrix,
)
from mtdist.grid import compute_split_tree


@pytest.fixture
def three_trees(lopsided, lopsided_reduced):
    return [lopsided, lopsided.with_children_order({1: (5, 2)}), lopsided_reduced]


def test_distance_matrix(three_trees):
    m = distance_matrix(three_trees)
    validate_matrix(m)
    assert m[0][0] == m[1][1] == m[2][2] == 0.0
    assert m[0][1] == 0.0  # same tree, permuted storage
    assert m[0][2] == m[1][2] == 6.5
    assert m[2][0] == 6.5


def test_distance_matrix_single():
    m = distance_matrix([MergeTree([(1, 0, 2.0)])])
    assert m == [[0.0]]


def test_distance_matrix_rejects_invalid_member():
    bad = MergeTree([(1, 0, 1.0), (2, 1, 1.0)])
    with pytest.raises(ValueError, match="tree 1"):
        distance_matrix([MergeTree([(1, 0, 2.0)]), bad])


def test_distance_matrix_workers_bit_identical(three_trees):
    trees = three_trees * 3
    assert distance_matrix(trees, workers=1) == distance_matrix(trees, workers=4)


def test_validate_matrix_rejects():
    with pytest.raises(ValueError):
        validate_matrix([[0.0, 1.0]])
    with pytest.raises(ValueError):
        validate_matrix([[0.0, 1.0], [2.0, 0.0]])
    with pytest.raises(ValueError):
        validate_matrix([[0.0, -1.0], [-1.0, 0.0]])
    with pytest.raises(ValueError):
        validate_matrix([[1.0, 1.0], [1.0, 0.0]])
    with pytest.raises(ValueError):
        validate_matrix([[0.0, math.inf], [math.inf, 0.0]])


def test_average_linkage_three_items():
    m = [[0.0, 1.0, 10.0], [1.0, 0.0, 10.0], [10.0, 10.0, 0.0]]
    assert average_linkage(m) == [(0, 1, 1.0, 3), (2, 3, 10.0, 4)]


def test_average_linkage_hand_fixture():
    # worked UPGMA example: first 0+1, then their cluster absorbs 2, then 3
    m = [
        [0.0, 2.0, 6.0, 10.0],
        [2.0, 0.0, 6.0, 10.0],
        [6.0, 6.0, 0.0, 8.0],
        [10.0, 10.0, 8.0, 0.0],
    ]
    merges = average_linkage(m)
    assert merges[0] == (0, 1, 2.0, 4)
    assert merges[1] == (2, 4, 6.0, 5)
    a, b, h, nid = merges[2]
    assert (a, b, nid) == (3, 5, 6)
    assert h == (1 * 8.0 + 2 * 10.0) / 3


def test_average_linkage_tie_prefers_smaller_pair():
    m = [[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]]
    merges = average_linkage(m)
    assert merges[0][:2] == (0, 1)


def test_average_linkage_heights_nondecreasing():
    import random

    rng = random.Random(4)
    pts = [rng.uniform(0, 10) for _ in range(9)]
    m = [[abs(a - b) for b in pts] for a in pts]
    merges = average_linkage(m)
    hs = [h for _, _, h, _ in merges]
    assert all(x <= y + 1e-12 for x, y in zip(hs, hs[1:]))
    assert [nid for _, _, _, nid in merges] == list(range(9, 17))


def test_dendrogram_text():
    out = dendrogram_text([(0, 1, 1.0, 3), (2, 3, 10.5, 4)])
    assert out == "merge 0 1 1 -> 3\nmerge 2 3 10.5 -> 4\n"


def test_outlier_scores(three_trees):
    m = distance_matrix(three_trees)
    assert outlier_scores(m) == [3.25, 3.25, 6.5]
    assert outlier_scores([[0.0]]) == [0.0]


def test_outlier_scores_flags_far_member():
    m = [[0.0, 1.0, 9.0], [1.0, 0.0, 9.0], [9.0, 9.0, 0.0]]
    s = outlier_scores(m)
    assert max(range(3), key=lambda i: s[i]) == 2


def test_lag_profile(three_trees):
    m = distance_matrix(three_trees)
    assert lag_profile(m) == [(1, 3.25), (2, 6.5)]
    with pytest.raises(ValueError):
        lag_profile([[0.0]])


def test_lag_profile_identical_members(lopsided):
    m = distance_matrix([lopsided] * 5)
    assert all(mu == 0.0 for _, mu in lag_profile(m))


def test_lag_profile_periodic_members(lopsided, lopsided_reduced, single_edge):
    cycle = [lopsided, lopsided_reduced, single_edge] * 3
    m = distance_matrix(cycle)
    prof = dict(lag_profile(m))
    assert prof[3] == 0.0 and prof[6] == 0.0
    assert prof[1] > 0.0


def test_csv_roundtrip(three_trees):
    m = distance_matrix(three_trees)
    assert parse_matrix_csv(matrix_to_csv(m)) == m
    assert matrix_to_csv([[0.0]]) == "0\n"


def test_parse_matrix_csv_errors():
    with pytest.raises(ParseError):
        parse_matrix_csv("")
    with pytest.raises(ParseError, match="square"):
        parse_matrix_csv("0,1\n")
    with pytest.raises(ParseError):
        parse_matrix_csv("0,x\nx,0\n")


def test_svg_has_one_rect_per_cell():
    svg = matrix_to_svg([[0.0, 1.0], [1.0, 0.0]])
    assert svg.count("<rect") == 4
    assert svg.startswith("<svg")
    # all-zero matrix must not divide by zero
    assert matrix_to_svg([[0.0]]).count("<rect") == 1


def test_profile_to_csv():
    assert profile_to_csv([(1, 3.25), (2, 6.5)]) == "1,3.25\n2,6.5\n"


def test_outlier_ensemble_shapes():
    fields, idx = outlier_ensemble(n_members=6, shape=(16, 16), seed=3)
    assert len(fields) == 6
    assert all(f.shape == (16, 16) for f in fields)
    assert 0 <= idx < 6
    again, idx2 = outlier_ensemble(n_members=6, shape=(16, 16), seed=3)
    assert idx2 == idx
    assert all((a == b).all() for a, b in zip(fields, again))


def test_periodic_series_shapes():
    fields = periodic_series(n_steps=8, period=4, shape=(16, 16), seed=1)
    assert len(fields) == 8
    assert all(f.shape == (16, 16) for f in fields)
    # the series is usable end to end
    t = compute_split_tree(fields[0])
    assert t.validate() == []
