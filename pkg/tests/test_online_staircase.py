import math
import random

import numpy as np
import pytest

from mongepaths.checks import check_partition, check_staircase
from mongepaths.monge import FLIPPED, STAIRCASE, MongeView, is_monge, random_monge
from mongepaths.online_rect import ContractError
from mongepaths.online_staircase import (
    OnlineStaircaseStructure,
    branching,
    default_delta,
    depth,
    partition_staircase,
)

INF = math.inf


def test_partition_trivial():
    p = partition_staircase(1, 0.5)
    assert list(p) == [(0, 0, 0, 0)]


def test_partition_side_four_binary():
    p = partition_staircase(4, 0.5)
    assert (p.b, p.z) == (2, 2)
    assert len(p) <= 2 * 4 - 1
    cells = [(i, j) for r0, r1, c0, c1 in p for i in range(r0, r1 + 1) for j in range(c0, c1 + 1)]
    assert sorted(cells) == [(i, j) for i in range(4) for j in range(i, 4)]


def test_partition_multiplicity_m100():
    p = partition_staircase(100, 0.5)
    rows = [sum(r0 <= i <= r1 for r0, r1, _, _ in p) for i in range(100)]
    cols = [sum(c0 <= j <= c1 for _, _, c0, c1 in p) for j in range(100)]
    assert max(rows) <= p.z + 1 and max(cols) <= p.z * p.b + 1
    assert rows == list(p.row_counts()) and cols == list(p.col_counts())


@pytest.mark.parametrize("eps", [0.25, 0.5, 0.75])
def test_partition_exact_cover_small(eps):
    for m in range(1, 130):
        check_partition(m, eps, full_grid=True)
        check_partition(m, eps)


def test_branching_clamped():
    assert branching(2, 0.5) == 2 and branching(3, 0.1) == 2
    assert branching(2 ** 16, 0.5) == 4
    assert depth(1, 2) == 0 and depth(5, 2) == 3
    assert default_delta(1, 0.5) == 1 and default_delta(256, 0.5) == math.ceil(8 ** 0.75)


def test_pieces_are_monge():
    m = random_monge(50, 50, 4, STAIRCASE)
    s = OnlineStaircaseStructure(m, 0.5)
    assert all(is_monge(p.base) for p in s.pieces)
    assert len(s.pieces) <= 2 * s.partition.b ** s.partition.z - 1


def test_one_by_one():
    s = OnlineStaircaseStructure(MongeView.from_table([[7]], STAIRCASE))
    assert len(s.pieces) == 1 and s.lower_bound() == INF
    with pytest.raises(ContractError):
        s.ensure_bound_and_get()
    s.activate_row(0, 0)
    nil = 0
    while True:
        c = s.ensure_bound_and_get()
        if c is not None:
            break
        nil += 1
    assert c == 0 and s.current_min(0) == 7
    assert nil <= len(s.pieces)


def test_rejects_rectangular():
    with pytest.raises(Exception):
        OnlineStaircaseStructure(random_monge(3, 3, 0))


def drain_all(m, d):
    s = OnlineStaircaseStructure(m, 0.5)
    for r in range(m.k):
        s.activate_row(r, d[r])
    got = {}
    while len(got) < m.k:
        c = s.ensure_bound_and_get()
        if c is not None:
            got[c] = s.current_min(c)
    return s, got


@pytest.mark.parametrize("shape", [STAIRCASE, FLIPPED])
def test_full_drain_40(shape):
    m = random_monge(40, 40, 8, shape)
    d = [random.Random(8).randint(0, 99) for _ in range(40)]
    s, got = drain_all(m, d)
    want = np.nanmin(m.to_array() + np.array(d)[:, None], axis=0)
    assert [got[c] for c in range(40)] == list(want)
    assert all(s.current_min(c) == got[c] for c in range(40))


def test_lower_bound_is_valid_and_tight_for_columns():
    m = random_monge(30, 30, 2, STAIRCASE)
    rng = random.Random(2)
    s = OnlineStaircaseStructure(m, 0.5)
    a = m.to_array()
    for r in rng.sample(range(30), 10):
        s.activate_row(r, rng.randint(0, 20))
        act = [x for x in range(30) if s.d[x] is not None]
        true = np.nanmin(a[act] + np.array([s.d[x] for x in act])[:, None])
        assert s.lower_bound() <= true
        (kind, _), key = s.H.peek()
        if kind == "c":
            assert key == true


@pytest.mark.parametrize("seed", range(30))
def test_random_interleavings_with_invariants(seed):
    check_staircase(seed, 40, invariants=True)


def test_row_incidence_bound():
    s = OnlineStaircaseStructure(random_monge(100, 100, 0, STAIRCASE), 0.5)
    assert max(len(w) for w in s.W_r) <= s.partition.z + 1
