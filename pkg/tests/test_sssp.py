import math

import pytest

from mongepaths.checks import check_sssp
from mongepaths.ddg import InfeasiblePriceError, Region, WeightedDigraph, build_ddg, grid_instance
from mongepaths.sssp import SsspInstance, make_instance, sssp_monge, sssp_naive, unreduce

INF = math.inf


def test_lonely_source():
    g = WeightedDigraph(1)
    inst = SsspInstance([build_ddg(g, Region([], [0], [0]))], [], {0: 0}, 0)
    for solve in (sssp_monge, sssp_naive):
        assert solve(inst).d == {0: 0}


def test_single_edge_region():
    g = WeightedDigraph(2, [(0, 1, 3)])
    ddg = build_ddg(g, Region([0], [0, 1], [0, 1]))
    inst = SsspInstance([ddg], [], {0: 0, 1: 0}, 0)
    for solve in (sssp_monge, sssp_naive):
        assert solve(inst).d[1] == 3


def test_unreachable_vertex_reported_infinite():
    g = WeightedDigraph(3, [(0, 1, 3)])
    ddgs = [build_ddg(g, Region([0], [0, 1], [0, 1])), build_ddg(g, Region([], [2], [2]))]
    inst = SsspInstance(ddgs, [], {0: 0, 1: 0, 2: 0}, 0)
    assert sssp_monge(inst).d[2] == INF == sssp_naive(inst).d[2]


def test_rejects_bad_input():
    g = WeightedDigraph(2, [(0, 1, 3)])
    ddg = build_ddg(g, Region([0], [0, 1], [0, 1]))
    with pytest.raises(InfeasiblePriceError):
        sssp_monge(SsspInstance([ddg], [], {0: 0, 1: 10}, 0))
    with pytest.raises(ValueError):
        sssp_naive(SsspInstance([ddg], [], {0: 0, 1: 0}, 7))


def test_unreduce():
    assert unreduce({1: 4, 2: INF}, {0: 0, 1: 0, 2: 0}, 0) == {1: 4, 2: INF}
    # path 0 -> 1 -> 2 -> 3 with lengths 2, -1, 4 and prices p
    p = {0: 5, 1: 1, 2: 7, 3: 2}
    lengths = [(0, 1, 2), (1, 2, -1), (2, 3, 4)]
    reduced = sum(w + p[u] - p[v] for u, v, w in lengths)
    assert unreduce({3: reduced}, p, 0)[3] == 5


def test_grid_16_matches_baselines():
    check_sssp(1, 16, 4)


def test_keys_monotone_and_counters():
    grid = grid_instance(16, 4, 3)
    inst = make_instance(grid, 3)
    res = sssp_monge(inst, debug=True)
    assert all(a <= b for a, b in zip(res.keys, res.keys[1:]))
    assert res.counters["ensure_calls"] > 0 and res.counters["extractions"] > 0


@pytest.mark.parametrize("eps", [0.25, 0.75])
def test_eps_does_not_change_answers(eps):
    inst = make_instance(grid_instance(8, 4, 9), 9)
    assert sssp_monge(inst, eps).d == sssp_naive(inst).d


@pytest.mark.parametrize("seed", range(12))
def test_mixed_instances(seed):
    mode = "float" if seed % 3 == 2 else "int"
    check_sssp(seed, (8, 12, 16)[seed % 3], (4, 4, 8)[seed % 3] if seed % 3 != 1 else 4, mode,
               skew=4 * (seed % 2))
