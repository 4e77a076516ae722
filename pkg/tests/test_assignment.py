"""Min-cost children assignment: fixed examples and a brute-force oracle."""

import itertools
import random

import pytest

from mtdist.assignment import canonical_total, child_assignment


def brute_assignment(cost, dels, inss):
    """Exhaustive optimum over every injective partial matching."""
    k1, k2 = len(dels), len(inss)
    best = None
    for r in range(min(k1, k2) + 1):
        for rows in itertools.combinations(range(k1), r):
            for cols in itertools.permutations(range(k2), r):
                pairs = list(zip(rows, cols))
                t = canonical_total(cost, dels, inss, pairs)
                if best is None or t < best:
                    best = t
    return best


def test_single_cell():
    # one child each side: match it, or delete one and insert the other
    for c, d, i in [(2.0, 5.0, 5.0), (9.0, 1.0, 3.0), (4.0, 4.0, 0.5)]:
        total, _ = child_assignment([[c]], [d], [i])
        assert total == min(c, d + i)


def test_identity_match():
    total, pairs = child_assignment([[0.0, 9.0], [9.0, 0.0]], [4.0, 4.0], [4.0, 4.0])
    assert total == 0.0
    assert pairs == [(0, 0), (1, 1)]


def test_cross_match():
    total, pairs = child_assignment([[5.0, 1.0], [1.0, 5.0]], [9.0, 9.0], [9.0, 9.0])
    assert total == 2.0
    assert pairs == [(0, 1), (1, 0)]


def test_unmatched_sides():
    total, pairs = child_assignment([], [], [2.0, 3.0])
    assert total == 5.0 and pairs == []
    total, pairs = child_assignment([[], []], [2.0, 3.0], [])
    assert total == 5.0 and pairs == []


def test_delete_beats_bad_match():
    total, pairs = child_assignment([[100.0]], [1.0], [2.0])
    assert total == 3.0 and pairs == []


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        child_assignment([[1.0]], [1.0, 2.0], [1.0])


@pytest.mark.parametrize("k1,k2", [(1, 1), (2, 2), (3, 2), (3, 3), (4, 2),
                                   (4, 4), (5, 3), (5, 5)])
def test_against_brute_force(k1, k2):
    # covers both the enumerated path (<=3x3) and the Hungarian path
    rng = random.Random(k1 * 100 + k2)
    for _ in range(40):
        cost = [[round(rng.uniform(0, 10), 3) for _ in range(k2)] for _ in range(k1)]
        dels = [round(rng.uniform(0, 10), 3) for _ in range(k1)]
        inss = [round(rng.uniform(0, 10), 3) for _ in range(k2)]
        total, pairs = child_assignment(cost, dels, inss)
        expect = brute_assignment(cost, dels, inss)
        assert abs(total - expect) <= 1e-9
        # reported pairs must reproduce the reported total
        assert canonical_total(cost, dels, inss, pairs) == pytest.approx(total, abs=1e-12)
        rows = [i for i, _ in pairs]
        cols = [j for _, j in pairs]
        assert len(set(rows)) == len(rows) and len(set(cols)) == len(cols)


def test_enumeration_and_hungarian_agree():
    # same instance fed to both code paths by padding with a prohibitive row
    rng = random.Random(99)
    for _ in range(25):
        cost = [[rng.uniform(0, 5) for _ in range(3)] for _ in range(3)]
        dels = [rng.uniform(0, 5) for _ in range(3)]
        inss = [rng.uniform(0, 5) for _ in range(3)]
        small, _ = child_assignment(cost, dels, inss)
        big_cost = [row + [1e6] for row in cost] + [[1e6] * 3 + [1e6]]
        big, _ = child_assignment(big_cost, dels + [0.0], inss + [0.0])
        assert abs(small - big) <= 1e-9
