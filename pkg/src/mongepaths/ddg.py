"""Regions, dense distance graphs, price functions and the hole decomposition.

A region is a subgraph whose boundary vertices lie on one hole, listed in
clockwise order.  Its dense distance graph (DDG) holds in-region shortest
path lengths between every ordered pair of boundary vertices.  Under a
feasible price function, the DDG splits into an upper staircase and a lower
(flipped) staircase matrix over the hole order, both Monge.
"""
from __future__ import annotations

import heapq
import math
import random
from collections import deque
from dataclasses import dataclass, field

from .monge import FLIPPED, STAIRCASE, MongeView

INF = math.inf


class NegativeCycleError(ValueError):
    pass


class InfeasiblePriceError(ValueError):
    pass


@dataclass
class WeightedDigraph:
    n: int
    edges: list[tuple[int, int, float]] = field(default_factory=list)

    def add_edge(self, u: int, v: int, w) -> int:
        self.edges.append((u, v, w))
        return len(self.edges) - 1

    def adjacency(self, edge_ids=None):
        adj = [[] for _ in range(self.n)]
        ids = range(len(self.edges)) if edge_ids is None else edge_ids
        for e in ids:
            u, v, w = self.edges[e]
            adj[u].append((v, w))
        return adj


@dataclass
class Region:
    edge_ids: list[int]
    vertices: list[int]
    boundary: list[int]  # hole order, clockwise
    holes: int = 1


@dataclass
class GridInstance:
    n: int
    block: int
    graph: WeightedDigraph
    regions: list[Region]
    links: list[int]  # edges between regions, not owned by any of them
    seed: int
    mode: str = "int"


@dataclass
class DdgMatrix:
    boundary: list[int]
    dist: list[list[float]]  # dist[a][b] by hole positions
    prices: dict[int, float]  # feasible price on all region vertices used to build it

    @property
    def size(self) -> int:
        return len(self.boundary)

    def __getitem__(self, ab):
        a, b = ab
        return self.dist[a][b]

    def edges(self):
        bd = self.boundary
        for a, u in enumerate(bd):
            for b, v in enumerate(bd):
                if a != b:
                    yield u, v, self.dist[a][b]


# -- shortest paths ---------------------------------------------------------

def dijkstra(adj, src: int, n: int | None = None) -> list[float]:
    n = len(adj) if n is None else n
    dist = [INF] * n
    dist[src] = 0
    pq = [(0, src)]
    while pq:
        du, u = heapq.heappop(pq)
        if du > dist[u]:
            continue
        for v, w in adj[u]:
            nd = du + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(pq, (nd, v))
    return dist


def bellman_ford(n: int, edges, init) -> list[float]:
    """Queue-based Bellman-Ford from a virtual source.

    ``init[v]`` is the length of the virtual arc to ``v`` (``INF`` for none).
    Raises :class:`NegativeCycleError` when a reachable negative cycle exists.
    """
    adj = [[] for _ in range(n)]
    for u, v, w in edges:
        adj[u].append((v, w))
    dist = list(init)
    inq = [d < INF for d in dist]
    q = deque(v for v in range(n) if inq[v])
    passes = [0] * n
    while q:
        u = q.popleft()
        inq[u] = False
        passes[u] += 1
        if passes[u] > n:
            raise NegativeCycleError("negative cycle detected")
        du = dist[u]
        for v, w in adj[u]:
            if du + w < dist[v]:
                dist[v] = du + w
                if not inq[v]:
                    inq[v] = True
                    q.append(v)
    return dist


def single_source(graph: WeightedDigraph, src: int, edge_ids=None) -> list[float]:
    """Distances from ``src``; handles negative lengths (no negative cycles)."""
    ids = range(len(graph.edges)) if edge_ids is None else edge_ids
    edges = [graph.edges[e] for e in ids]
    if all(w >= 0 for _, _, w in edges):
        return dijkstra(graph.adjacency(ids), src, graph.n)
    init = [INF] * graph.n
    init[src] = 0
    return bellman_ford(graph.n, edges, init)


# -- prices -----------------------------------------------------------------

def check_feasible(phi, edges, tol: float = 0.0) -> bool:
    """True iff ``w + phi[u] - phi[v] >= -tol`` on every edge."""
    return all(w + phi[u] - phi[v] >= -tol for u, v, w in edges)


def compute_initial_prices(vertices, edges) -> dict[int, float]:
    """Feasible prices for a subgraph: zero if all lengths are nonnegative,
    otherwise distances from a virtual source with zero-length arcs."""
    vertices = list(vertices)
    if all(w >= 0 for _, _, w in edges):
        return {v: 0 for v in vertices}
    idx = {v: i for i, v in enumerate(vertices)}
    local = [(idx[u], idx[v], w) for u, v, w in edges]
    dist = bellman_ford(len(vertices), local, [0] * len(vertices))
    return {v: dist[idx[v]] for v in vertices}


def random_feasible_prices(vertices, edges, seed: int, spread=10, floats: bool = False) -> dict[int, float]:
    """Feasible prices = distances from a virtual source whose arcs get
    random nonnegative lengths, so most prices differ from zero."""
    rng = random.Random(seed)
    vertices = list(vertices)
    idx = {v: i for i, v in enumerate(vertices)}
    init = [rng.uniform(0, spread) if floats else rng.randint(0, spread) for _ in vertices]
    local = [(idx[u], idx[v], w) for u, v, w in edges]
    dist = bellman_ford(len(vertices), local, init)
    return {v: dist[idx[v]] for v in vertices}


# -- regions ------------------------------------------------------------------

def region_edges(graph: WeightedDigraph, region: Region):
    return [graph.edges[e] for e in region.edge_ids]


def augment(edges):
    """Add a reverse copy of length ``1 + sum |w|`` for every edge lacking one."""
    big = 1 + sum(abs(w) for _, _, w in edges)
    have = {(u, v) for u, v, _ in edges}
    extra = [(v, u, big) for u, v, _ in edges if (v, u) not in have]
    return list(edges) + extra, big


def build_ddg(graph: WeightedDigraph, region: Region, prices: dict | None = None) -> DdgMatrix:
    """All boundary-to-boundary distances inside the region.

    Runs one Dijkstra per boundary vertex on reduced lengths and unreduces
    the results.
    """
    edges, _ = augment(region_edges(graph, region))
    if prices is None:
        prices = compute_initial_prices(region.vertices, edges)
    elif not check_feasible(prices, edges, 1e-9):
        raise InfeasiblePriceError("region prices are not feasible")
    idx = {v: i for i, v in enumerate(region.vertices)}
    adj = [[] for _ in region.vertices]
    for u, v, w in edges:
        adj[idx[u]].append((idx[v], w + prices[u] - prices[v]))
    bd = region.boundary
    dist = []
    for u in bd:
        du = dijkstra(adj, idx[u])
        dist.append([0 if v == u else du[idx[v]] - prices[u] + prices[v] for v in bd])
    return DdgMatrix(list(bd), dist, dict(prices))


def decompose_hole(ddg: DdgMatrix, phi=None, holes: int = 1):
    """Split ``DDG^phi`` over the hole order into (staircase, flipped) views.

    Entry ``(a, b)`` of either matrix is ``DDG[a, b] + phi(u_a) - phi(u_b)``
    where ``u_a`` is the ``a``-th boundary vertex; the staircase keeps
    ``a <= b`` and the flipped one ``a >= b``.
    """
    if holes != 1:
        raise ValueError("only single-hole regions are supported")
    bd = ddg.boundary
    p = [phi[u] if phi is not None else 0 for u in bd]
    dist = ddg.dist

    def get(a, b):
        return dist[a][b] + p[a] - p[b]

    m = len(bd)
    return MongeView(get, m, m, STAIRCASE, rows=bd, cols=bd), MongeView(get, m, m, FLIPPED, rows=bd, cols=bd)


def perimeter(top: int, left: int, size: int, n: int) -> list[int]:
    """Clockwise perimeter of a ``size x size`` tile, starting top-left."""
    if size == 1:
        return [top * n + left]
    out = [top * n + left + j for j in range(size)]
    out += [(top + i) * n + left + size - 1 for i in range(1, size)]
    out += [(top + size - 1) * n + left + j for j in range(size - 2, -1, -1)]
    out += [(top + i) * n + left for i in range(size - 2, 0, -1)]
    return out


def grid_instance(n: int, block: int, seed: int, weights=(1, 10), mode: str = "int",
                  skew: int = 0) -> GridInstance:
    """Seeded ``n x n`` bidirected grid cut into ``block x block`` tiles.

    Vertex ``(i, j)`` has id ``i * n + j``.  Each tile is a region whose
    boundary is its perimeter; grid edges joining two tiles belong to no
    region and are returned as ``links``.  With ``skew > 0`` every length is
    shifted by ``p(u) - p(v)`` for random vertex potentials ``p``, which
    creates negative lengths but no negative cycles.
    """
    if n < 1 or block < 1 or n % block:
        raise ValueError("block must divide n")
    if mode not in ("int", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    lo, hi = weights
    draw = (lambda: rng.randint(lo, hi)) if mode == "int" else (lambda: rng.uniform(lo, hi))
    pot = [rng.randint(0, skew) if mode == "int" else rng.uniform(0, skew) for _ in range(n * n)] \
        if skew else None
    g = WeightedDigraph(n * n)
    tile = lambda v: ((v // n) // block, (v % n) // block)
    owned: dict[tuple[int, int], list[int]] = {}
    links = []
    for i in range(n):
        for j in range(n):
            u = i * n + j
            for di, dj in ((0, 1), (1, 0)):
                if i + di >= n or j + dj >= n:
                    continue
                v = (i + di) * n + j + dj
                for a, b in ((u, v), (v, u)):
                    w = draw()
                    if pot is not None:
                        w = w + pot[a] - pot[b]
                    e = g.add_edge(a, b, w)
                    if tile(a) == tile(b):
                        owned.setdefault(tile(a), []).append(e)
                    else:
                        links.append(e)
    regions = []
    for ti in range(n // block):
        for tj in range(n // block):
            verts = [(ti * block + a) * n + tj * block + b for a in range(block) for b in range(block)]
            regions.append(Region(owned.get((ti, tj), []), verts,
                                  perimeter(ti * block, tj * block, block, n)))
    return GridInstance(n, block, g, regions, links, seed, mode)


# -- files ----------------------------------------------------------------------

def write_graph(g: WeightedDigraph, fh) -> None:
    fh.write(f"{g.n} {len(g.edges)}\n")
    for u, v, w in g.edges:
        fh.write(f"{u} {v} {w!r}\n")


def _num(tok: str):
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def read_graph(fh) -> WeightedDigraph:
    n, m = map(int, fh.readline().split())
    g = WeightedDigraph(n)
    for _ in range(m):
        u, v, w = fh.readline().split()
        g.add_edge(int(u), int(v), _num(w))
    return g


def write_regions(regions: list[Region], fh) -> None:
    """One region per three lines: ``edges ...``, ``vertices ...``, ``hole ...``."""
    fh.write(f"{len(regions)}\n")
    for r in regions:
        fh.write("edges " + " ".join(map(str, r.edge_ids)) + "\n")
        fh.write("vertices " + " ".join(map(str, r.vertices)) + "\n")
        fh.write("hole " + " ".join(map(str, r.boundary)) + "\n")


def read_regions(fh) -> list[Region]:
    out = []
    for _ in range(int(fh.readline())):
        parts = [fh.readline().split() for _ in range(3)]
        if [p[0] for p in parts] != ["edges", "vertices", "hole"]:
            raise ValueError("malformed region record")
        e, v, h = ([int(x) for x in p[1:]] for p in parts)
        out.append(Region(e, v, h))
    return out
