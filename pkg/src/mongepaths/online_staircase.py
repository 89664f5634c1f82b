"""Online column minima of a staircase offset Monge matrix.

The staircase domain is cut into rectangles by a biased recursive
partition; each rectangle runs its own block structure and a shared heap
holds pending columns and pieces.  The lower bound offered here is relaxed:
an ensure call may resolve a block instead of reporting a column.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .heap import PairingHeap
from .monge import FLIPPED, RECT, MongeView, ShapeError
from .online_block import OnlineBlockStructure
from .online_rect import ContractError, InvariantReport
from .subrow import SHORT, ShiftedOracle, SubrowOracle

INF = math.inf


def branching(m: int, eps: float) -> int:
    lg = math.log2(m) if m > 1 else 0.0
    return max(2, math.floor(lg ** eps))


def depth(m: int, b: int) -> int:
    z, p = 0, 1
    while p < m:
        p *= b
        z += 1
    return z


def default_delta(m: int, eps: float) -> int:
    lg = math.log2(m) if m > 1 else 0.0
    return max(1, math.ceil(lg ** (1 - eps / 2)))


@lru_cache(maxsize=64)
def _padded(b: int, z: int) -> np.ndarray:
    """Rectangles ``(r0, r1, c0, c1)`` covering the staircase of side b**z."""
    out = []
    stack = [(0, b ** z)]
    while stack:
        o, n = stack.pop()
        if n == 1:
            out.append((o, o, o, o))
            continue
        s = n // b
        for i in range(b):
            stack.append((o + i * s, s))
            if i < b - 1:
                out.append((o + i * s, o + (i + 1) * s - 1, o + (i + 1) * s, o + n - 1))
    arr = np.array(sorted(out), dtype=np.int64).reshape(-1, 4)
    arr.setflags(write=False)
    return arr


@dataclass
class StaircasePartition:
    m: int
    eps: float
    b: int
    z: int
    rects: np.ndarray  # rows of (r0, r1, c0, c1), inclusive

    def __len__(self):
        return len(self.rects)

    def __iter__(self):
        return (tuple(int(x) for x in r) for r in self.rects)

    def row_counts(self) -> np.ndarray:
        cnt = np.zeros(self.m + 1, dtype=np.int64)
        np.add.at(cnt, self.rects[:, 0], 1)
        np.add.at(cnt, self.rects[:, 1] + 1, -1)
        return np.cumsum(cnt)[:-1]

    def col_counts(self) -> np.ndarray:
        cnt = np.zeros(self.m + 1, dtype=np.int64)
        np.add.at(cnt, self.rects[:, 2], 1)
        np.add.at(cnt, self.rects[:, 3] + 1, -1)
        return np.cumsum(cnt)[:-1]


def partition_staircase(m: int, eps: float) -> StaircasePartition:
    """Cut the ``m x m`` staircase into disjoint rectangles.

    The side is padded to ``b**z``; the padded staircase splits into ``b``
    diagonal staircases and ``b - 1`` rectangles (block row ``i`` against all
    columns right of diagonal block ``i``), recursively.  Padding is trimmed
    afterwards and rectangles left empty are dropped.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    b = branching(m, eps)
    z = depth(m, b)
    p = _padded(b, z)
    t = p.copy()
    np.minimum(t[:, 1], m - 1, out=t[:, 1])
    np.minimum(t[:, 3], m - 1, out=t[:, 3])
    keep = (t[:, 0] <= t[:, 1]) & (t[:, 2] <= t[:, 3])
    return StaircasePartition(m, eps, b, z, t[keep])


class OnlineStaircaseStructure:
    """Relaxed online column minima over a staircase or flipped staircase.

    Indices in the public API always refer to ``base``; a flipped input is
    handled internally on the view with both index orders reversed.
    """

    def __init__(self, base: MongeView, eps: float = 0.5, delta: int | None = None, oracle=None):
        if base.shape == RECT:
            raise ShapeError("online_staircase needs a staircase or flipped matrix")
        self.base = base
        self.m = base.k
        self.flipped = base.shape == FLIPPED
        self.view = base.reversed() if self.flipped else base
        self.eps = eps
        self.delta = delta if delta is not None else default_delta(self.m, eps)
        if self.m == 0:
            self.partition = None
        else:
            self.partition = partition_staircase(self.m, eps)
        if oracle is None and self.m:
            oracle = SubrowOracle(self.view, SHORT, window=max(1, min(self.delta, self.m)))
        self.oracle = oracle
        self.counters = Counter()
        self.piece_ensures = Counter()
        self.extracted_keys: list = []
        self.pieces: list[OnlineBlockStructure] = []
        self.origin: list[tuple[int, int]] = []
        self.W_r: list[list[tuple[int, int]]] = [[] for _ in range(self.m)]
        self.W_c: list[list[tuple[int, int]]] = [[] for _ in range(self.m)]
        view = self.view
        for r0, r1, c0, c1 in (self.partition or ()):
            def get(i, j, r0=r0, c0=c0):
                return view.value(r0 + i, c0 + j)
            piece = MongeView(get, r1 - r0 + 1, c1 - c0 + 1)
            idx = len(self.pieces)
            self.pieces.append(OnlineBlockStructure(
                piece, min(self.delta, piece.l), ShiftedOracle(oracle, r0, c0)))
            self.origin.append((r0, c0))
            for r in range(r0, r1 + 1):
                self.W_r[r].append((idx, r - r0))
            for c in range(c0, c1 + 1):
                self.W_c[c].append((idx, c - c0))
        self.H = PairingHeap()
        for c in range(self.m):
            self.H.insert(("c", c), INF)
        for idx in range(len(self.pieces)):
            self.H.insert(("p", idx), INF)
        self.d: list = [None] * self.m
        self.n_active = 0
        self.reported: dict[int, float] = {}

    def _in(self, i: int) -> int:
        return self.m - 1 - i if self.flipped else i

    def activate_row(self, r: int, offset) -> None:
        r = self._in(r)
        if self.d[r] is not None:
            raise ContractError(f"row {r} activated twice")
        self.d[r] = offset
        self.n_active += 1
        for idx, i in self.W_r[r]:
            piece = self.pieces[idx]
            piece.activate_row(i, offset)
            self._absorb(idx)
            if ("p", idx) in self.H:
                self.H.decrease_key(("p", idx), piece.block_lower_bound())

    def _absorb(self, idx: int) -> None:
        piece = self.pieces[idx]
        c0 = self.origin[idx][1]
        for lc in piece.drain_updates():
            item = ("c", c0 + lc)
            if item in self.H:
                self.H.decrease_key(item, piece.current_min(lc))

    def lower_bound(self):
        if self.n_active == 0 or len(self.reported) == self.m:
            return INF
        return self.H.min_key()

    def ensure_bound_and_get(self):
        """Pop the heap top; returns a newly reported column or ``None``."""
        if not self.H:
            raise ContractError("nothing left to extract")
        if self.H.min_key() == INF:
            raise ContractError("lower bound is infinite; activate a row first")
        self.counters["extractions"] += 1
        (kind, x), key = self.H.extract_min()
        self.extracted_keys.append(key)
        if kind == "c":
            self.reported[x] = key
            return self._in(x)
        piece = self.pieces[x]
        piece.block_ensure_bound()
        self.piece_ensures[x] += 1
        self.counters["nil_returns"] += 1
        if piece.pending_blocks:
            self.H.insert(("p", x), piece.block_lower_bound())
        self._absorb(x)
        return None

    def current_min(self, c: int):
        return self.reported.get(self._in(c), INF)

    def piece_width_sum(self) -> int:
        return sum(p.l for p in self.pieces)

    def check_invariants(self, tol: float = 0.0) -> InvariantReport:
        rep = InvariantReport()
        bad = rep.problems.append
        for idx, piece in enumerate(self.pieces):
            item = ("p", idx)
            if piece.pending_blocks:
                if item not in self.H:
                    bad(f"piece {idx} with pending blocks missing from the heap")
                elif self.H.key(item) != piece.block_lower_bound():
                    bad(f"piece {idx} key differs from its lower bound")
        for c in range(self.m):
            item = ("c", c)
            if c in self.reported:
                if item in self.H:
                    bad(f"reported column {c} still queued")
                continue
            want = min((self.pieces[i].current_min(lc) for i, lc in self.W_c[c]), default=INF)
            if abs(self.H.key(item) - want) > tol and not (want == INF == self.H.key(item)):
                bad(f"column {c} key differs from its piece minima")
        act = [r for r in range(self.m) if self.d[r] is not None]
        pend = [c for c in range(self.m) if c not in self.reported]
        if act and pend:
            a = self.view.to_array()[act][:, pend] + np.array([self.d[r] for r in act], dtype=float)[:, None]
            true = np.nanmin(a) if not np.all(np.isnan(a)) else INF
            if self.lower_bound() > true + tol:
                bad("lower bound exceeds the smallest pending entry")
        return rep
