"""Seeded randomized drivers shared by the test-suite and ``validate``.

Each driver builds an instance, runs the structure under a random but valid
interleaving and compares against brute-force recomputation.  A failed
comparison raises :class:`CheckFailure`; on success a dict of measurements
is returned.
"""
from __future__ import annotations

import math
import random

import numpy as np

from .ddg import build_ddg, check_feasible, decompose_hole, grid_instance, random_feasible_prices
from .monge import FLIPPED, STAIRCASE, brute_column_minima, is_monge, random_monge, smawk_bottommost_minima
from .online_block import OnlineBlockStructure
from .online_rect import OnlineRectStructure
from .online_staircase import OnlineStaircaseStructure, partition_staircase
from .sssp import make_instance, sssp_monge, sssp_naive, unreduce, whole_graph_distances

INF = math.inf


class CheckFailure(AssertionError):
    pass


def need(cond, msg) -> None:
    if not cond:
        raise CheckFailure(msg)


def _schedule(rng, k, offs, A, activate, pending, lower_bound, ensure, after):
    """Activate rows in random order; between activations run a random
    number of ensure calls, each only when no inactive row can undercut the
    current lower bound."""
    B = A + np.asarray(offs, dtype=float)[:, None]
    inactive = np.ones(k, dtype=bool)
    order = list(range(k))
    rng.shuffle(order)

    def floor():
        rows = B[inactive]
        return np.nanmin(rows) if rows.size and not np.all(np.isnan(rows)) else INF

    for r in order:
        budget = rng.choice([0, 1, 2, 5, k + A.shape[1]])
        while budget and pending():
            lb = lower_bound()
            if lb == INF or floor() < lb:
                break
            ensure()
            after("ensure")
            budget -= 1
        activate(r, offs[r])
        inactive[r] = False
        after("activate")
    while pending():
        ensure()
        after("ensure")
    return B


def check_smawk(seed: int, kmax: int = 200, lmax: int = 200) -> dict:
    rng = random.Random(seed)
    k, l = rng.randint(1, kmax), rng.randint(1, lmax)
    M = random_monge(k, l, seed, floats=seed % 4 == 3)
    a, b = smawk_bottommost_minima(M), brute_column_minima(M)
    need(a == b, f"smawk differs from brute force on seed {seed}")
    return {"k": k, "l": l}


def check_rect(seed: int, kmax: int = 64, lmax: int = 64, invariants: bool = True) -> dict:
    rng = random.Random(seed)
    k, l = rng.randint(1, kmax), rng.randint(1, lmax)
    M = random_monge(k, l, seed, floats=seed % 5 == 4)
    offs = [rng.randint(0, 8 * max(k, l)) for _ in range(k)]
    s = OnlineRectStructure(M)
    got = {}

    def ensure():
        c = s.ensure_bound_and_get()
        need(c not in got, f"column {c} reported twice")
        got[c] = s.minimum_of(c)

    def after(what):
        if invariants:
            rep = s.check_invariants()
            need(rep.ok, f"seed {seed} after {what}: {rep}")

    B = _schedule(rng, k, offs, M.to_array(), s.activate_row, lambda: s.pending,
                  s.lower_bound, ensure, after)
    need(s.counters["ensures"] == l, f"{s.counters['ensures']} ensure calls for {l} columns")
    ref = B.min(axis=0)
    need(all(got[c] == ref[c] for c in range(l)), f"wrong minima on seed {seed}")
    return {"k": k, "l": l, "ensures": s.counters["ensures"]}


def check_block(seed: int, kmax: int = 64, lmax: int = 64, invariants: bool = True) -> dict:
    rng = random.Random(seed)
    k, l = rng.randint(1, kmax), rng.randint(1, lmax)
    delta = rng.randint(1, min(l, 8))
    M = random_monge(k, l, seed, floats=seed % 5 == 4)
    offs = [rng.randint(0, 8 * max(k, l)) for _ in range(k)]
    s = OnlineBlockStructure(M, delta)
    shadow = [INF] * l
    worst = 0

    def after(what):
        nonlocal worst
        if invariants:
            rep = s.check_invariants()
            need(rep.ok, f"seed {seed} after {what}: {rep}")
        changed = set(s.drain_updates())
        real = {c for c in range(l) if s.current_min(c) != shadow[c]}
        need(changed == real, f"update queue out of sync on seed {seed}")
        for c in real:
            shadow[c] = s.current_min(c)
        if what == "activate":
            worst = max(worst, len(changed))

    B = _schedule(rng, k, offs, M.to_array(), s.activate_row, lambda: s.pending_blocks,
                  s.block_lower_bound, s.block_ensure_bound, after)
    need(s.counters["block_ensures"] == len(s.blocks), "block ensure count differs from block count")
    ref = B.min(axis=0)
    need(all(s.current_min(c) == ref[c] for c in range(l)), f"wrong minima on seed {seed}")
    return {"k": k, "l": l, "delta": delta, "max_changes": worst,
            "scans": s.counters["candidate_scans"], "scan_budget": k * delta + l}


def check_staircase(seed: int, mmax: int = 128, invariants: bool = False, eps: float | None = None) -> dict:
    rng = random.Random(seed)
    m = rng.randint(1, mmax)
    shape = rng.choice([STAIRCASE, FLIPPED])
    eps = eps if eps is not None else rng.choice([0.25, 0.5, 0.75])
    M = random_monge(m, m, seed, shape=shape, floats=seed % 5 == 4)
    offs = [rng.randint(0, 8 * m) for _ in range(m)]
    s = OnlineStaircaseStructure(M, eps)
    got = {}

    def ensure():
        c = s.ensure_bound_and_get()
        if c is not None:
            need(c not in got, f"column {c} reported twice")
            got[c] = s.current_min(c)

    def after(what):
        if invariants:
            rep = s.check_invariants()
            need(rep.ok, f"seed {seed} after {what}: {rep}")

    B = _schedule(rng, m, offs, M.to_array(), s.activate_row, lambda: len(got) < m,
                  s.lower_bound, ensure, after)
    ref = np.nanmin(B, axis=0)
    need(all(got[c] == ref[c] for c in range(m)), f"wrong minima on seed {seed} ({shape})")
    keys = s.extracted_keys
    need(all(a <= b for a, b in zip(keys, keys[1:])), f"extraction keys decrease on seed {seed}")
    return {"m": m, "shape": shape, "eps": eps, "nil": s.counters["nil_returns"],
            "nil_budget": s.piece_width_sum() / s.delta, "pieces": len(s.pieces)}


def check_partition(m: int, eps: float, full_grid: bool = False) -> dict:
    p = partition_staircase(m, eps)
    r = p.rects
    need(np.all(r[:, 0] <= r[:, 1]) and np.all(r[:, 2] <= r[:, 3]), "empty rectangle kept")
    need(np.all(r[:, 1] <= r[:, 2]), "rectangle reaches below the diagonal")
    need(r[:, 1].max() < m and r[:, 3].max() < m, "rectangle leaves the matrix")
    area = int(((r[:, 1] - r[:, 0] + 1) * (r[:, 3] - r[:, 2] + 1)).sum())
    need(area == m * (m + 1) // 2, f"area {area} differs from staircase size")
    if full_grid:
        cover = np.zeros((m + 1, m + 1), dtype=np.int64)
        np.add.at(cover, (r[:, 0], r[:, 2]), 1)
        np.add.at(cover, (r[:, 1] + 1, r[:, 2]), -1)
        np.add.at(cover, (r[:, 0], r[:, 3] + 1), -1)
        np.add.at(cover, (r[:, 1] + 1, r[:, 3] + 1), 1)
        cover = cover.cumsum(0).cumsum(1)[:m, :m]
        need(np.array_equal(cover, np.triu(np.ones((m, m), dtype=np.int64))), "cover is not exact")
    else:
        # every row must be tiled by its rectangles' column intervals
        h = r[:, 1] - r[:, 0] + 1
        idx = np.repeat(np.arange(len(r)), h)
        start = np.repeat(np.cumsum(h) - h, h)
        rows = r[idx, 0] + np.arange(idx.size) - start
        order = np.argsort(rows * m + r[idx, 2], kind="stable")
        rows, c0, c1 = rows[order], r[idx, 2][order], r[idx, 3][order]
        head = np.r_[True, rows[1:] != rows[:-1]]
        tail = np.r_[rows[1:] != rows[:-1], True]
        need(np.array_equal(rows[head], np.arange(m)), "some row is not covered")
        need(np.array_equal(c0[head], rows[head]), "row tiling does not start on the diagonal")
        need(np.all(c1[tail] == m - 1), "row tiling does not reach the last column")
        need(np.array_equal(c1[:-1][~tail[:-1]] + 1, c0[1:][~head[1:]]), "row tiling has gaps or overlaps")
    need(p.row_counts().max() <= p.z + 1, "row multiplicity bound broken")
    need(p.col_counts().max() <= p.z * p.b + 1, "column multiplicity bound broken")
    need(len(p) <= 2 * p.b ** p.z - 1, "too many rectangles")
    return {"m": m, "eps": eps, "b": p.b, "z": p.z, "rects": len(p)}


def check_decompose(seed: int, n: int = 8, block: int = 4, skew: int = 0) -> dict:
    grid = grid_instance(n, block, seed, skew=skew)
    rng = random.Random(seed)
    region = grid.regions[rng.randrange(len(grid.regions))]
    ddg = build_ddg(grid.graph, region)
    edges = list(ddg.edges())
    phi = random_feasible_prices(ddg.boundary, edges, seed)
    need(check_feasible(phi, edges), "generated prices are infeasible")
    plus, minus = decompose_hole(ddg, phi)
    need(is_monge(plus), f"staircase part not Monge on seed {seed}")
    need(is_monge(minus), f"flipped part not Monge on seed {seed}")
    return {"boundary": ddg.size}


def check_sssp(seed: int, n: int, block: int, mode: str = "int", eps: float = 0.5,
               weights=(1, 10), skew: int = 0) -> dict:
    grid = grid_instance(n, block, seed, weights, mode, skew)
    inst = make_instance(grid, seed)
    tol = 1e-9 if mode == "float" else 0
    a = sssp_monge(inst, eps, debug=True)
    b = sssp_naive(inst)
    true = unreduce(a.d, inst.phi, inst.source)
    ref = whole_graph_distances(grid, inst)
    for v in inst.boundary:
        need(abs(a.d[v] - b.d[v]) <= tol if b.d[v] < INF else a.d[v] == INF,
             f"monge and naive differ at {v} on seed {seed}")
        need(abs(true[v] - ref[v]) <= tol if ref[v] < INF else true[v] == INF,
             f"distance at {v} differs from whole-graph reference on seed {seed}")
    return {"boundary": len(inst.boundary), **a.counters}
