"""Single-source shortest paths over boundary vertices.

The graph seen by the solvers has vertex set = all region boundaries, the
complete DDG of every region plus a set ``P`` of extra edges.  Distances are
computed under reduced lengths ``w + phi(u) - phi(v)``; :func:`unreduce`
turns them back into true lengths.
"""
from __future__ import annotations

import heapq
import math
import random
from collections import Counter
from dataclasses import dataclass, field

from .ddg import (
    DdgMatrix,
    GridInstance,
    InfeasiblePriceError,
    WeightedDigraph,
    build_ddg,
    check_feasible,
    decompose_hole,
    random_feasible_prices,
    single_source,
)
from .heap import PairingHeap
from .online_staircase import OnlineStaircaseStructure

INF = math.inf


@dataclass
class SsspInstance:
    ddgs: list[DdgMatrix]
    P: list[tuple[int, int, float]]
    phi: dict[int, float]
    source: int
    tol: float = 0.0

    @property
    def boundary(self) -> list[int]:
        seen = dict.fromkeys(v for g in self.ddgs for v in g.boundary)
        seen.update(dict.fromkeys(x for u, v, _ in self.P for x in (u, v)))
        return list(seen)

    def all_edges(self):
        for g in self.ddgs:
            yield from g.edges()
        yield from self.P

    def validate(self) -> None:
        if self.source not in set(self.boundary):
            raise ValueError(f"source {self.source} is not a boundary vertex")
        if not check_feasible(self.phi, self.all_edges(), self.tol):
            raise InfeasiblePriceError("price function is not feasible")


@dataclass
class SsspResult:
    d: dict[int, float]
    counters: Counter = field(default_factory=Counter)
    keys: list = field(default_factory=list)


def unreduce(d: dict, phi: dict, s: int) -> dict:
    return {v: x - phi[s] + phi[v] if x < INF else INF for v, x in d.items()}


def sssp_naive(inst: SsspInstance) -> SsspResult:
    """Plain Dijkstra over every DDG edge plus ``P`` under reduced lengths."""
    inst.validate()
    phi = inst.phi
    adj: dict[int, list] = {v: [] for v in inst.boundary}
    for u, v, w in inst.all_edges():
        adj[u].append((v, w + phi[u] - phi[v]))
    res = SsspResult({v: INF for v in adj})
    d = res.d
    d[inst.source] = 0
    pq = [(0, inst.source)]
    done = set()
    while pq:
        du, u = heapq.heappop(pq)
        if u in done:
            continue
        done.add(u)
        res.counters["extractions"] += 1
        for v, w in adj[u]:
            res.counters["relaxations"] += 1
            if du + w < d[v]:
                d[v] = du + w
                heapq.heappush(pq, (d[v], v))
    return res


def sssp_monge(inst: SsspInstance, eps: float = 0.5, delta: int | None = None,
               debug: bool = False) -> SsspResult:
    """Dijkstra where each DDG is represented by two online staircase structures."""
    inst.validate()
    phi = inst.phi
    bd = inst.boundary
    res = SsspResult({v: INF for v in bd})
    cnt = res.counters
    structs: list[OnlineStaircaseStructure] = []
    orders: list[list[int]] = []
    incident: dict[int, list[tuple[int, int]]] = {v: [] for v in bd}
    for g in inst.ddgs:
        for mat in decompose_hole(g, phi):
            t = len(structs)
            structs.append(OnlineStaircaseStructure(mat, eps, delta))
            orders.append(g.boundary)
            for pos, v in enumerate(g.boundary):
                incident[v].append((t, pos))
    out: dict[int, list] = {v: [] for v in bd}
    for u, v, w in inst.P:
        out[u].append((v, w + phi[u] - phi[v]))

    H = PairingHeap()
    for v in bd:
        H.insert(("v", v), 0 if v == inst.source else INF)
    for t in range(len(structs)):
        H.insert(("s", t), INF)
    S = set()
    last = -INF
    while len(S) < len(bd) and H.min_key() < INF:
        (kind, x), key = H.extract_min()
        cnt["extractions"] += 1
        if debug:
            assert key >= last - 1e-9, "extraction keys went down"
            res.keys.append(key)
        last = key
        if kind == "v":
            res.d[x] = key
            S.add(x)
            for t, pos in incident[x]:
                st = structs[t]
                st.activate_row(pos, key)
                H.decrease_key(("s", t), st.lower_bound())
            for y, w in out[x]:
                if y not in S:
                    cnt["relaxations"] += 1
                    H.decrease_key(("v", y), key + w)
            continue
        st = structs[x]
        cnt["ensure_calls"] += 1
        col = st.ensure_bound_and_get()
        if col is None:
            cnt["nil_returns"] += 1
        else:
            y = orders[x][col]
            if y not in S:
                cnt["relaxations"] += 1
                H.decrease_key(("v", y), st.current_min(col))
        H.insert(("s", x), st.lower_bound())
        cnt["reinsertions"] += 1
    return res


def boundary_size_sum(inst: SsspInstance) -> int:
    return sum(g.size for g in inst.ddgs)


def make_instance(grid: GridInstance, seed: int, extra_p: int | None = None,
                  price_spread=10, source: int | None = None) -> SsspInstance:
    """DDGs of every region, ``P`` = link edges plus random extra edges, and
    random feasible prices over the boundary."""
    rng = random.Random(seed)
    g = grid.graph
    floats = grid.mode == "float"
    ddgs = [build_ddg(g, r) for r in grid.regions]
    bd = list(dict.fromkeys(v for d in ddgs for v in d.boundary))
    P = [g.edges[e] for e in grid.links]
    base_edges = [e for d in ddgs for e in d.edges()] + P
    phi = random_feasible_prices(bd, base_edges, rng.randrange(1 << 30), price_spread, floats)
    # extra edges are given nonnegative reduced length so phi stays feasible
    k = rng.randint(0, len(bd)) if extra_p is None else extra_p
    for _ in range(k if len(bd) > 1 else 0):
        u, v = rng.sample(bd, 2)
        slack = rng.uniform(0, price_spread) if floats else rng.randint(0, price_spread)
        P.append((u, v, phi[v] - phi[u] + slack))
    if source is None:
        source = rng.choice(bd)
    return SsspInstance(ddgs, P, phi, source, 1e-9 if floats else 0)


def whole_graph_distances(grid: GridInstance, inst: SsspInstance) -> dict[int, float]:
    """Reference: shortest paths in the full graph (region edges plus ``P``)."""
    g = grid.graph
    edges = [g.edges[e] for r in grid.regions for e in r.edge_ids] + list(inst.P)
    full = WeightedDigraph(g.n, edges)
    dist = single_source(full, inst.source)
    return {v: dist[v] for v in inst.boundary}
