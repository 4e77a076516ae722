"""Shared fixtures.

The "lopsided" tree appears throughout: a six-edge binary tree whose
distance to its two-contraction reduction is known exactly (6.5).
Node ids: 0 root, 1 trunk, 2 saddle, 3/4 its children, 5 leaf off the trunk.
"""

import pytest

from mtdist import MergeTree


@pytest.fixture
def lopsided():
    # root--1: 3, 1--2: 3, 2--3: 4, 2--4: 1.5, 1--5: 5
    return MergeTree([(1, 0, 3.0), (2, 1, 3.0), (3, 2, 4.0), (4, 2, 1.5), (5, 1, 5.0)])


@pytest.fixture
def lopsided_reduced():
    # lopsided with both short leaves contracted away: a single edge of
    # label 3 + 3 + 4, distance 1.5 + 5 = 6.5 from the original
    return MergeTree([(1, 0, 10.0)])


@pytest.fixture
def single_edge():
    return MergeTree([(1, 0, 3.0)])


def assert_valid(tree):
    problems = tree.validate()
    assert problems == [], problems
