import math
import random

import numpy as np
import pytest

from mongepaths.checks import check_block
from mongepaths.monge import MongeView, condense, is_monge, random_monge
from mongepaths.online_block import OnlineBlockStructure, block_bounds
from mongepaths.online_rect import ContractError

INF = math.inf


def test_block_layout():
    assert block_bounds(10, 3) == [(0, 2), (3, 5), (6, 8), (9, 9)]
    s = OnlineBlockStructure(random_monge(4, 10, 0), 10)
    assert len(s.blocks) == 1


def test_condensed_matrix_is_monge():
    m = random_monge(20, 30, 3)
    s = OnlineBlockStructure(m, 4)
    assert is_monge(s.condensed)
    ref = condense(m, [[i] for i in range(20)], [range(a, b + 1) for a, b in s.blocks])
    assert s.condensed.to_table() == ref.to_table()


def test_fresh_structure():
    s = OnlineBlockStructure(random_monge(5, 7, 1), 2)
    assert s.drain_updates() == []
    assert s.block_lower_bound() == INF
    assert s.current_min(3) == INF
    s.activate_row(2, 0)
    assert s.drain_updates() == []


def test_single_row_single_block():
    m = MongeView.from_table([[4, 2, 6]])
    s = OnlineBlockStructure(m, 3)
    s.activate_row(0, 1)
    assert s.block_lower_bound() == 3
    s.block_ensure_bound()
    assert [s.current_min(c) for c in range(3)] == [5, 3, 7]
    assert sorted(s.drain_updates()) == [0, 1, 2]
    assert s.block_lower_bound() == INF
    with pytest.raises(ContractError):
        s.block_ensure_bound()


def test_lower_bound_single_row_is_row_minimum():
    m = random_monge(6, 12, 5)
    s = OnlineBlockStructure(m, 3)
    s.activate_row(4, 7)
    assert s.block_lower_bound() == min(m.value(4, c) for c in range(12)) + 7
    assert s.block_lower_bound() == s.inner.lower_bound()


def test_full_run_30x50():
    m = random_monge(30, 50, 21)
    rng = random.Random(21)
    d = [rng.randint(0, 200) for _ in range(30)]
    s = OnlineBlockStructure(m, 5)
    for r in rng.sample(range(30), 30):
        s.activate_row(r, d[r])
    b = m.to_array() + np.array(d)[:, None]
    while s.pending_blocks:
        j = s.block_ensure_bound()
        lo, hi = s.blocks[j]
        assert len(s.drain_updates()) == hi - lo + 1
    assert [s.current_min(c) for c in range(50)] == list(b.min(axis=0))
    assert s.counters["block_ensures"] == 10


def test_candidate_interval_holds_a_minimizer():
    # after each resolution the scanned row range contains a true minimizer
    for seed in range(15):
        m = random_monge(30, 30, seed)
        rng = random.Random(seed)
        s = OnlineBlockStructure(m, 4)
        for r in rng.sample(range(30), 30):
            s.activate_row(r, rng.randint(0, 50))
        b = m.to_array() + np.array(s.d)[:, None]
        while s.pending_blocks:
            j = s.block_ensure_bound()
            lo_row = s.inner.current_min_row(j + 1) if j + 1 < len(s.blocks) else 0
            hi_row = s.inner.current_min_row(j - 1) if j > 0 else 29
            lo, hi = s.blocks[j]
            for c in range(lo, hi + 1):
                assert b[lo_row:hi_row + 1, c].min() == b[:, c].min()


@pytest.mark.parametrize("seed", range(40))
def test_random_interleavings(seed):
    out = check_block(seed, 40, 40)
    assert out["max_changes"] <= 2 * out["delta"]


def test_interleaving_40x40_delta4_exact_after_each_call():
    m = random_monge(40, 40, 99)
    rng = random.Random(99)
    s = OnlineBlockStructure(m, 4)
    order = rng.sample(range(40), 40)
    a = m.to_array()
    d = {}
    for r in order:
        s.activate_row(r, rng.randint(0, 100))
        d[r] = s.d[r]
        rows = sorted(d)
        b = a[rows] + np.array([d[x] for x in rows])[:, None]
        for j in s.y:
            lo, hi = s.blocks[j]
            assert s.cmin[lo:hi + 1] == list(b.min(axis=0)[lo:hi + 1])
        inactive = [x for x in range(40) if x not in d]
        if inactive and s.pending_blocks and (a[inactive] + 100).min() >= s.block_lower_bound():
            s.block_ensure_bound()
