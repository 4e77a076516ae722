"""Merge tree structure, validation, serialization, and derived quantities."""

import math
import random

import pytest

from mtdist import EMPTY, MergeTree, ParseError, parse_mt, write_mt
from mtdist.oracle import TreeGenConfig, random_tree

from conftest import assert_valid


def test_empty_tree():
    assert EMPTY.is_empty
    assert EMPTY.edge_count == 0
    assert EMPTY.validate() == []
    assert EMPTY.total_persistence() == 0.0
    assert EMPTY.canonical_form() == "()"


def test_lopsided_is_valid(lopsided):
    assert_valid(lopsided)
    assert lopsided.edge_count == 5
    assert not lopsided.is_empty


def test_construction_rejects_two_parents():
    with pytest.raises(ValueError, match="two parents"):
        MergeTree([(1, 0, 1.0), (1, 2, 1.0), (2, 0, 1.0)])


def test_construction_rejects_self_loop():
    with pytest.raises(ValueError, match="self-loop"):
        MergeTree([(1, 1, 1.0)])


def test_construction_rejects_cycle():
    with pytest.raises(ValueError, match="cycle"):
        MergeTree([(1, 0, 1.0), (0, 1, 1.0)])


def test_construction_rejects_forest():
    with pytest.raises(ValueError, match="multiple roots"):
        MergeTree([(1, 0, 1.0), (3, 2, 1.0)])


def test_validate_root_degree():
    # root with two children is not a merge tree
    t = MergeTree([(1, 0, 1.0), (2, 0, 1.0)])
    msgs = t.validate()
    assert any("root 0 has degree 2" in m for m in msgs)


def test_validate_degree_one_inner():
    t = MergeTree([(1, 0, 1.0), (2, 1, 1.0)])
    msgs = t.validate()
    assert msgs == ["inner node 1 has degree one"]


def test_validate_nonpositive_label():
    t = MergeTree([(1, 0, 0.0)])
    msgs = t.validate()
    assert len(msgs) == 1 and "nonpositive label" in msgs[0]
    t = MergeTree([(1, 0, -2.0)])
    assert any("nonpositive label" in m for m in t.validate())


def test_subtree(lopsided):
    sub = lopsided.subtree((2, 1))
    assert_valid(sub)
    assert sub.root == 1
    assert sorted(sub.nodes) == [1, 2, 3, 4]
    assert sub.edge_count == 3
    # root edge subtree is the whole tree
    assert lopsided.subtree((1, 0)).canonical_form() == lopsided.canonical_form()


def test_subtract_splices(lopsided):
    # removing the trunk leaf merges the two edges around node 1: 3 + 3 = 6
    rest = lopsided.subtract((5, 1))
    assert_valid(rest)
    assert rest.parent[2] == 0 and rest.label[2] == 6.0
    assert rest.edge_count == 3
    assert 1 not in rest.nodes and 5 not in rest.nodes


def test_subtract_keeps_wide_saddle():
    t = MergeTree([(1, 0, 2.0), (2, 1, 1.0), (3, 1, 1.0), (4, 1, 1.0)])
    rest = t.subtract((2, 1))
    assert_valid(rest)
    assert rest.edge_count == 3
    assert rest.label[1] == 2.0


def test_subtract_root_edge_rejected(single_edge):
    with pytest.raises(ValueError, match="root edge"):
        single_edge.subtract((1, 0))


def test_path_label(lopsided):
    assert lopsided.path_label((0, 1, 2, 3)) == 10.0
    assert lopsided.path_label((0, 1)) == 3.0
    with pytest.raises(ValueError):
        lopsided.path_label((0,))
    with pytest.raises(ValueError):
        lopsided.path_label((0, 3))  # not an edge


def test_total_persistence(lopsided):
    assert lopsided.total_persistence() == 16.5


def test_total_persistence_additive(lopsided):
    # subtree and remainder partition the label mass
    for c, p in lopsided.edges():
        if p == lopsided.root:
            continue
        a = lopsided.subtree((c, p)).total_persistence()
        b = lopsided.subtract((c, p)).total_persistence()
        assert math.isclose(a + b, lopsided.total_persistence(), abs_tol=1e-9)


def test_canonical_form(lopsided):
    assert lopsided.canonical_form() == "(3:(3:(1.5:)(4:))(5:))"


def test_canonical_ignores_ids_and_order(lopsided):
    mirror = MergeTree(
        [(9, 7, 3.0), (3, 9, 5.0), (5, 9, 3.0), (2, 5, 1.5), (1, 5, 4.0)]
    )
    assert mirror.canonical_form() == lopsided.canonical_form()
    perm = lopsided.with_children_order({1: (5, 2), 2: (4, 3)})
    assert perm.canonical_form() == lopsided.canonical_form()


def test_canonical_distinguishes_labels(lopsided):
    other = MergeTree([(1, 0, 3.0), (2, 1, 3.0), (3, 2, 4.0), (4, 2, 1.5), (5, 1, 5.5)])
    assert other.canonical_form() != lopsided.canonical_form()


def test_with_children_order_rejects_bad_permutation(lopsided):
    with pytest.raises(ValueError):
        lopsided.with_children_order({1: (5, 5)})


def test_write_format(lopsided):
    text = write_mt(lopsided)
    lines = text.splitlines()
    assert lines[0] == "# mtree v1"
    assert lines[1] == "e 1 0 3"
    assert "e 4 2 1.5" in lines


def test_roundtrip(lopsided, single_edge):
    for t in (lopsided, single_edge, EMPTY):
        back = parse_mt(write_mt(t))
        assert back == t
        assert back.canonical_form() == t.canonical_form()


def test_roundtrip_random():
    rng = random.Random(42)
    for _ in range(25):
        cfg = TreeGenConfig(
            seed=rng.randrange(2**32),
            edge_count=rng.randint(0, 6),
            max_degree=rng.choice((2, 3)),
        )
        t = random_tree(cfg)
        assert parse_mt(write_mt(t)) == t


def test_parse_rejects_missing_header():
    with pytest.raises(ParseError, match="header"):
        parse_mt("1 0 3\n")


def test_parse_rejects_malformed_rows():
    with pytest.raises(ParseError, match="line 2"):
        parse_mt("# mtree v1\ne 1 0\n")
    with pytest.raises(ParseError, match="line 2"):
        parse_mt("# mtree v1\ne 1 0 abc\n")
    with pytest.raises(ParseError, match="label"):
        parse_mt("# mtree v1\ne 1 0 -1\n")
    with pytest.raises(ParseError, match="label"):
        parse_mt("# mtree v1\ne 1 0 inf\n")
    with pytest.raises(ParseError, match="negative"):
        parse_mt("# mtree v1\ne -1 0 3\n")
    with pytest.raises(ParseError, match="duplicate"):
        parse_mt("# mtree v1\ne 1 0 3\ne 1 0 4\n")


def test_parse_rejects_invalid_structure():
    # structurally broken edge sets surface as parse errors, not crashes
    with pytest.raises(ParseError):
        parse_mt("# mtree v1\ne 1 0 3\ne 3 2 4\n")
    with pytest.raises(ParseError, match="degree one"):
        parse_mt("# mtree v1\ne 1 0 3\ne 2 1 4\n")


def test_equality_and_hash(lopsided):
    same = MergeTree([(c, p, lopsided.label[c]) for c, p in lopsided.edges()])
    assert same == lopsided
    assert hash(same) == hash(lopsided)
    assert lopsided != EMPTY
