"""Online column minima at block granularity.

Columns are cut into blocks of at most ``delta`` columns.  A rectangular
online structure runs over the block-minimum matrix (one column per block);
once it reports a block, exact per-column minima of that block are filled in
from a small candidate row set and kept current as further rows arrive.
"""
from __future__ import annotations

import math
from collections import Counter

import numpy as np
from sortedcontainers import SortedList, SortedSet

from .monge import RECT, MongeView, ShapeError
from .online_rect import ContractError, InvariantReport, OnlineRectStructure
from .subrow import SCAN, SHORT, SubrowOracle

INF = math.inf


def block_bounds(l: int, delta: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + delta, l) - 1) for lo in range(0, l, delta)]


class OnlineBlockStructure:
    def __init__(self, base: MongeView, delta: int, oracle=None, alpha: int | None = None):
        if base.shape != RECT:
            raise ShapeError("online_block needs a rectangular matrix")
        if not 1 <= delta <= max(base.l, 1):
            raise ValueError(f"block width {delta} outside [1, {base.l}]")
        self.base = base
        self.k, self.l = base.k, base.l
        self.delta = delta
        self.oracle = oracle if oracle is not None else SubrowOracle(base, SHORT, window=delta)
        self.blocks = block_bounds(self.l, delta)
        self.block_of = [j for j, (lo, hi) in enumerate(self.blocks) for _ in range(lo, hi + 1)]
        self.d: list = [None] * self.k
        self.counters = Counter()
        # block-minimum matrix; every access is one short subrow query
        self.condensed = MongeView(self._block_min, self.k, len(self.blocks))
        self.inner = OnlineRectStructure(
            self.condensed, SubrowOracle(self.condensed, SCAN), alpha)
        self.cmin = [INF] * self.l
        self.y: dict[int, int] = {}
        self.Y = SortedList()
        self.first: dict[int, int] = {}
        self.last: dict[int, int] = {}
        self.D = (SortedSet(), SortedSet())
        self.updates: list[int] = []
        self._array = None

    def _block_min(self, r: int, j: int):
        lo, hi = self.blocks[j]
        self.counters["short_queries"] += 1
        return self.oracle.subrow_min(r, lo, hi)[1]

    def entry(self, r: int, c: int):
        return self.base.value(r, c) + self.d[r]

    @property
    def pending_blocks(self) -> int:
        return self.inner.pending

    def _touch(self, c: int, v) -> None:
        if v < self.cmin[c]:
            self.cmin[c] = v
            self.updates.append(c)

    def activate_row(self, r: int, offset) -> None:
        if self.d[r] is not None:
            raise ContractError(f"row {r} activated twice")
        self.updates = []
        self.d[r] = offset
        self.inner.activate_row(r, offset)
        self.D[0].add(r)
        self.D[1].add(r)
        # only the resolved blocks next to r in the y order can see r win
        i = self.Y.bisect_right(r)
        affected = []
        if i < len(self.Y):
            affected.append(self.last[self.Y[i]])
        if i > 0:
            j = self.first[self.Y[i - 1]]
            if j not in affected:
                affected.append(j)
        for j in affected:
            lo, hi = self.blocks[j]
            for c in range(lo, hi + 1):
                self._touch(c, self.entry(r, c))
        self.counters["activation_changes"] += len(self.updates)
        self.counters["max_activation_changes"] = max(
            self.counters["max_activation_changes"], len(self.updates))

    def block_lower_bound(self):
        return self.inner.lower_bound()

    def block_ensure_bound(self) -> int:
        """Resolve the pending block holding the smallest remaining entry."""
        if not self.inner.pending:
            raise ContractError("no pending blocks")
        self.updates = []
        j = self.inner.ensure_bound_and_get()
        self.counters["block_ensures"] += 1
        yj = self.inner.done[j]
        self.y[j] = yj
        if yj not in self.first:
            self.Y.add(yj)
            self.first[yj] = self.last[yj] = j
        else:
            self.first[yj] = min(self.first[yj], j)
            self.last[yj] = max(self.last[yj], j)

        D = self.D[j % 2]
        lo_row, hi_row = 0, self.k - 1
        keep = set()
        if j + 1 < len(self.blocks):
            lo_row = self.inner.current_min_row(j + 1)
            keep.add(lo_row)
        if j > 0:
            hi_row = self.inner.current_min_row(j - 1)
            keep.add(hi_row)
        D.update(keep)
        cands = list(D.irange(lo_row, hi_row))
        lo, hi = self.blocks[j]
        self.counters["candidate_scans"] += len(cands) * (hi - lo + 1)
        for c in range(lo, hi + 1):
            self._touch(c, min(self.entry(p, c) for p in cands))
        for p in cands:
            if p not in keep:
                D.discard(p)
        return j

    def current_min(self, c: int):
        return self.cmin[c]

    def drain_updates(self) -> list[int]:
        out = list(dict.fromkeys(self.updates))
        self.updates = []
        return out

    def check_invariants(self, tol: float = 0.0) -> InvariantReport:
        rep = self.inner.check_invariants(tol)
        bad = rep.problems.append
        act = [r for r in range(self.k) if self.d[r] is not None]
        if not act:
            return rep
        if self._array is None:
            self._array = self.base.to_array()
        offs = np.array([self.d[r] for r in act], dtype=float)
        sub = self._array[act] + offs[:, None]
        colmin = sub.min(axis=0)
        resolved = sorted(self.y)
        for j in resolved:
            lo, hi = self.blocks[j]
            got = np.array(self.cmin[lo:hi + 1], dtype=float)
            if np.any(np.abs(got - colmin[lo:hi + 1]) > tol):
                bad(f"cmin wrong in block {j}")
        ys = [self.y[j] for j in resolved]
        if any(a < b for a, b in zip(ys, ys[1:])):
            bad("resolved block rows not monotone")
        pos = {r: t for t, r in enumerate(act)}
        for j in range(len(self.blocks)):
            if j in self.y:
                continue
            lo, hi = self.blocks[j]
            rows = [pos[p] for p in self.D[j % 2]]
            if not rows:
                bad(f"empty candidate set for block {j}")
                continue
            best = sub[rows, lo:hi + 1].min(axis=0)
            if np.any(np.abs(best - colmin[lo:hi + 1]) > tol):
                bad(f"candidate set misses a minimizer of block {j}")
        return rep
