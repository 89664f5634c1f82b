import io
import random

import pytest

from mongepaths.checks import check_decompose
from mongepaths.ddg import (
    NegativeCycleError,
    Region,
    WeightedDigraph,
    bellman_ford,
    build_ddg,
    check_feasible,
    compute_initial_prices,
    decompose_hole,
    dijkstra,
    grid_instance,
    random_feasible_prices,
    read_graph,
    read_regions,
    single_source,
    write_graph,
    write_regions,
)
from mongepaths.monge import FLIPPED, STAIRCASE


def test_single_edge_region():
    g = WeightedDigraph(2, [(0, 1, 3)])
    d = build_ddg(g, Region([0], [0, 1], [0, 1]))
    # the missing reverse direction gets length 1 + sum |w|
    assert d[0, 1] == 3 and d[1, 0] == 4


def test_interior_vertex_path():
    g = WeightedDigraph(3, [(0, 2, 1), (2, 1, 2), (2, 0, 1), (1, 2, 2)])
    d = build_ddg(g, Region([0, 1, 2, 3], [0, 1, 2], [0, 1]))
    assert d[0, 1] == 3


def test_ddg_matches_single_pair_paths():
    # independent oracle: Bellman-Ford on the region subgraph for every pair
    for seed in range(6):
        grid = grid_instance(8, 4, seed, skew=4 * (seed % 2))
        for r in grid.regions:
            d = build_ddg(grid.graph, r)
            edges = [grid.graph.edges[e] for e in r.edge_ids]
            for a, u in enumerate(r.boundary):
                init = [float("inf")] * grid.graph.n
                init[u] = 0
                dist = bellman_ford(grid.graph.n, edges, init)
                assert [d[a, b] for b in range(len(r.boundary))] == [dist[v] for v in r.boundary]


def test_ddg_triangle_and_zero_diagonal():
    grid = grid_instance(8, 4, 1)
    d = build_ddg(grid.graph, grid.regions[0])
    n = d.size
    assert all(d[a, a] == 0 for a in range(n))
    for a in range(n):
        for b in range(n):
            for c in range(n):
                assert d[a, c] <= d[a, b] + d[b, c]


def test_feasibility_checks():
    edges = [(0, 1, 2), (1, 2, 0), (2, 0, 5)]
    assert check_feasible({0: 0, 1: 0, 2: 0}, edges)
    init = [0, 3, 1]
    dist = bellman_ford(3, edges, init)
    phi = dict(enumerate(dist))
    assert check_feasible(phi, edges)
    phi[1] += 10  # raise the head of 0 -> 1
    assert not check_feasible(phi, edges)


def test_initial_prices():
    assert compute_initial_prices([0, 1], [(0, 1, 4)]) == {0: 0, 1: 0}
    edges = [(0, 1, -3), (1, 2, 2), (0, 2, -2)]
    phi = compute_initial_prices([0, 1, 2], edges)
    assert check_feasible(phi, edges)
    with pytest.raises(NegativeCycleError):
        compute_initial_prices([0, 1], [(0, 1, 1), (1, 0, -2)])


def test_decompose_two_vertex_boundary():
    g = WeightedDigraph(2, [(0, 1, 3), (1, 0, 2)])
    d = build_ddg(g, Region([0, 1], [0, 1], [0, 1]))
    plus, minus = decompose_hole(d, {0: 0, 1: 0})
    assert plus.shape == STAIRCASE and minus.shape == FLIPPED
    assert plus.to_table() == [[0, 3], [None, 0]]
    assert minus.to_table() == [[0, None], [2, 0]]


def test_decomposition_recovers_reduced_ddg():
    grid = grid_instance(8, 4, 5)
    d = build_ddg(grid.graph, grid.regions[2])
    phi = random_feasible_prices(d.boundary, list(d.edges()), 5)
    plus, minus = decompose_hole(d, phi)
    for a, u in enumerate(d.boundary):
        for b, v in enumerate(d.boundary):
            vals = [m.value(a, b) for m in (plus, minus) if m.defined(a, b)]
            assert min(vals) == d[a, b] + phi[u] - phi[v]


def test_multi_hole_rejected():
    grid = grid_instance(4, 2, 0)
    with pytest.raises(ValueError):
        decompose_hole(build_ddg(grid.graph, grid.regions[0]), holes=2)


@pytest.mark.parametrize("seed", range(20))
def test_decomposition_is_monge(seed):
    check_decompose(seed, 8, 4, skew=3 * (seed % 2))


def test_grid_shapes():
    g = grid_instance(2, 2, 0)
    assert len(g.regions) == 1 and sorted(g.regions[0].boundary) == [0, 1, 2, 3]
    g = grid_instance(8, 4, 0)
    assert len(g.regions) == 4 and all(len(r.boundary) == 12 for r in g.regions)
    assert g.regions[0].boundary[:5] == [0, 1, 2, 3, 11]
    with pytest.raises(ValueError):
        grid_instance(6, 4, 0)


def test_grid_deterministic():
    a, b = grid_instance(8, 4, 7, mode="float"), grid_instance(8, 4, 7, mode="float")
    assert a.graph.edges == b.graph.edges and a.links == b.links


def test_reduction_identity_on_paths():
    grid = grid_instance(8, 4, 3, skew=5)
    edges = grid.graph.edges
    phi = compute_initial_prices(range(grid.graph.n), edges)
    rng = random.Random(3)
    adj = grid.graph.adjacency()
    for _ in range(50):
        v = rng.randrange(grid.graph.n)
        path, total, red = [v], 0, 0
        for _ in range(rng.randint(1, 10)):
            w_to, w = rng.choice(adj[path[-1]])
            total += w
            red += w + phi[path[-1]] - phi[w_to]
            path.append(w_to)
        assert red == total + phi[path[0]] - phi[path[-1]]


def test_single_source_with_negative_lengths():
    grid = grid_instance(6, 3, 2, skew=6)
    assert any(w < 0 for _, _, w in grid.graph.edges)
    dist = single_source(grid.graph, 0)
    phi = compute_initial_prices(range(grid.graph.n), grid.graph.edges)
    adj = [[(v, w + phi[u] - phi[v]) for v, w in nbrs] for u, nbrs in enumerate(grid.graph.adjacency())]
    red = dijkstra(adj, 0)
    assert dist == [red[v] - phi[0] + phi[v] for v in range(grid.graph.n)]


def test_file_roundtrip():
    grid = grid_instance(8, 4, 1, mode="float")
    buf = io.StringIO()
    write_graph(grid.graph, buf)
    buf.seek(0)
    assert read_graph(buf).edges == grid.graph.edges
    buf = io.StringIO()
    write_regions(grid.regions, buf)
    buf.seek(0)
    back = read_regions(buf)
    assert [(r.edge_ids, r.vertices, r.boundary) for r in back] == \
        [(r.edge_ids, r.vertices, r.boundary) for r in grid.regions]
