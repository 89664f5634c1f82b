"""Online column minima of a rectangular offset Monge matrix.

Rows are revealed one at a time together with their offsets; the structure
keeps column groups with small potential row sets so that the smallest
not-yet-reported column minimum is always available from a heap.
"""
from __future__ import annotations

import bisect
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from sortedcontainers import SortedList

from .heap import PairingHeap
from .monge import RECT, MongeView, ShapeError, smawk_rows
from .subrow import SubrowOracle

INF = math.inf


class ContractError(RuntimeError):
    """A documented precondition of an operation was violated."""


def default_alpha(m: int) -> int:
    lg = math.log2(m) if m > 1 else 0.0
    return max(2, round(math.sqrt(lg)))


def split_point(value, rows: list[int], lo: int, hi: int, i: int, counters: Counter | None = None) -> int:
    """Find the split column of a Monge submatrix.

    ``rows`` (top to bottom) and the columns ``lo..hi`` select a Monge
    matrix.  Returns ``s`` such that every column ``<= s`` has a minimum in
    ``rows[i:]`` (the bottom part) and every column ``> s`` has one in
    ``rows[:i]``.  ``s == lo - 1`` means all columns go to the top part.

    Works on ``len(rows)`` evenly spread columns at a time and recurses into
    the gap where the bottommost minimizer crosses from one part to the
    other.
    """
    u = len(rows)
    if not 0 < i < u:
        raise ValueError("split index must leave both parts non-empty")
    pos = {r: t for t, r in enumerate(rows)}
    while True:
        v = hi - lo + 1
        if v <= u:
            cols = list(range(lo, hi + 1))
            arg = smawk_rows(value, rows, cols)
            if counters is not None:
                counters["smawk_calls"] += 1
            s = lo - 1
            for c in cols:
                if pos[arg[c]] < i:
                    break
                s = c
            return s
        sample = sorted({lo + (t * (v - 1)) // (u - 1) for t in range(u)})
        arg = smawk_rows(value, rows, sample)
        if counters is not None:
            counters["smawk_calls"] += 1
        below = [pos[arg[c]] >= i for c in sample]
        if all(below):
            return hi
        if not any(below):
            return lo - 1
        j = below.index(False) - 1
        lo, hi = sample[j], sample[j + 1]


@dataclass
class InvariantReport:
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __str__(self):
        return "ok" if self.ok else "; ".join(self.problems)


class OnlineRectStructure:
    """Reports column minima of ``off(base, d)`` in non-decreasing order.

    Offsets ``d`` are revealed by :meth:`activate_row`.  The caller promises,
    before each :meth:`ensure_bound_and_get`, that no inactive row holds an
    entry below :meth:`lower_bound`.
    """

    def __init__(self, base: MongeView, oracle: SubrowOracle | None = None, alpha: int | None = None):
        if base.shape != RECT:
            raise ShapeError("online_rect needs a rectangular matrix")
        self.base = base
        self.k, self.l = base.k, base.l
        self.oracle = oracle if oracle is not None else SubrowOracle(base)
        self.alpha = alpha if alpha is not None else default_alpha(max(self.k, self.l))
        self.d: list = [None] * self.k
        self.n_active = 0
        self.F = SortedList()
        self.P: dict[int, list[int]] = {}
        self.done: dict[int, int] = {}
        self.member: dict[int, SortedList] = {}
        self.U = SortedList()
        self.H = PairingHeap()
        self.counters = Counter()
        for c in range(self.l):
            self.H.insert(c, INF)
        self._array = None

    # -- small helpers -------------------------------------------------
    def entry(self, r: int, c: int):
        return self.base.value(r, c) + self.d[r]

    def _index(self, c: int) -> int:
        return self.F.bisect_right(c) - 1

    def group_of(self, c: int) -> int:
        return self.F[self._index(c)]

    def _end(self, g: int) -> int:
        i = self.F.bisect_right(g)
        return self.F[i] - 1 if i < len(self.F) else self.l - 1

    def _prev(self, g: int):
        i = self.F.index(g)
        return self.F[i - 1] if i > 0 else None

    def _next(self, g: int):
        i = self.F.index(g) + 1
        return self.F[i] if i < len(self.F) else None

    def groups(self):
        """``(start, end, rows, done)`` for every group, left to right."""
        return [(g, self._end(g), tuple(self.P[g]), g in self.done) for g in self.F]

    def _pmin(self, g: int, c: int):
        return min(self.entry(p, c) for p in self.P[g])

    def _join(self, g: int, r: int):
        rows = self.P[g]
        if r in rows:
            return
        bisect.insort(rows, r)
        self.counters["pset_insertions"] += 1
        ms = self.member.get(r)
        if ms is None:
            ms = self.member[r] = SortedList()
            self.U.add(r)
        ms.add(g)

    def _leave(self, g: int, r: int):
        self.P[g].remove(r)
        ms = self.member[r]
        ms.remove(g)
        if not ms:
            del self.member[r]
            self.U.remove(r)

    def _new_group(self, g: int, rows) -> None:
        self.F.add(g)
        self.P[g] = []
        for r in sorted(rows):
            self._join(g, r)

    def _drop_group(self, g: int) -> list[int]:
        rows = list(self.P[g])
        for r in rows:
            self._leave(g, r)
        del self.P[g]
        self.F.remove(g)
        return rows

    def _restore_heap(self, g: int) -> None:
        # one subrow query per potential row; the best of them is the group minimum
        end = self._end(g)
        for r in self.P[g]:
            c, v = self.oracle.subrow_min(r, g, end)
            self.counters["oracle_queries"] += 1
            self.H.decrease_key(c, v + self.d[r])

    # -- queries ---------------------------------------------------------
    def lower_bound(self):
        if self.n_active == 0 or not self.H:
            return INF
        return self.H.min_key()

    def current_min_row(self, c: int):
        if self.n_active == 0:
            return None
        g = self.group_of(c)
        if g in self.done:
            return self.done[g]
        best, bv = None, INF
        for p in self.P[g]:  # top to bottom, so ties keep the topmost row
            v = self.entry(p, c)
            if best is None or v < bv:
                best, bv = p, v
        return best

    @property
    def pending(self) -> int:
        return len(self.H)

    # -- row activation ---------------------------------------------------
    def _covers(self, g: int, r: int) -> bool:
        """True when ``r`` attains the minimum at both border columns of ``g``."""
        e = self._end(g)
        return self.entry(r, g) <= self._pmin(g, g) and self.entry(r, e) <= self._pmin(g, e)

    def activate_row(self, r: int, offset) -> None:
        if self.d[r] is not None:
            raise ContractError(f"row {r} activated twice")
        self.d[r] = offset
        self.n_active += 1
        self.counters["activations"] += 1
        if not self.F:
            self._new_group(0, [r])
            self._restore_heap(0)
            return

        straddle = None
        i = self.U.bisect_right(r)
        if i < len(self.U):
            g = self.member[self.U[i]][-1]
            if g not in self.done and self.P[g][0] < r:
                straddle = g
                left, right = self._prev(g), self._next(g)
            else:
                left, right = g, self._next(g)
        else:
            left, right = None, self.F[0]

        # groups left of the boundary only hold rows below r, so the columns
        # where r wins form a suffix of each; to the right they form a prefix
        left_run, left_c2 = [], None
        g = left
        while g is not None and g not in self.done:
            self.counters["group_checks"] += 1
            if self._covers(g, r):
                left_run.append(g)
                g = self._prev(g)
                continue
            e = self._end(g)
            if self.entry(r, e) < self._pmin(g, e):
                left_c2 = g
            break
        right_run, right_c2 = [], None
        g = right
        while g is not None and g not in self.done:
            self.counters["group_checks"] += 1
            if self._covers(g, r):
                right_run.append(g)
                g = self._next(g)
                continue
            if self.entry(r, g) < self._pmin(g, g):
                right_c2 = g
            break

        straddle_covered = straddle is not None and self._covers(straddle, r)
        if straddle_covered:
            run = left_run[::-1] + [straddle] + right_run
        else:
            run = left_run[::-1] + right_run

        touched = []
        if straddle is not None and not straddle_covered:
            # r may not sit in S together with rows on the far side of a
            # neighbour that now holds r; those rows are dominated by r in S
            keep_r = True
            if left_run or left_c2 is not None:
                keep_r = self.entry(r, straddle) <= self._pmin(straddle, straddle)
                for p in [p for p in self.P[straddle] if p > r]:
                    self._leave(straddle, p)
            elif right_run or right_c2 is not None:
                e = self._end(straddle)
                keep_r = self.entry(r, e) <= self._pmin(straddle, e)
                for p in [p for p in self.P[straddle] if p < r]:
                    self._leave(straddle, p)
            if keep_r:
                self._join(straddle, r)
            touched.append(straddle)
        if run:
            start = run[0]
            for g in run:
                self._drop_group(g)
                self.counters["merged_groups"] += 1
            self._new_group(start, [r])
            touched.append(start)
        for g in (left_c2, right_c2):
            if g is not None:
                self._join(g, r)
                touched.append(g)

        final = []
        for g in touched:
            if len(self.P[g]) >= 2 * self.alpha:
                final.extend(self.split_group(g))
            else:
                final.append(g)
        for g in final:
            self._restore_heap(g)

    def split_group(self, g: int) -> list[int]:
        """Halve an over-full potential set; returns the resulting group starts."""
        rows = list(self.P[g])
        end = self._end(g)
        a = len(rows) // 2
        s = split_point(self.entry, rows, g, end, a, self.counters)
        self.counters["splits"] += 1
        self._drop_group(g)
        top, bottom = rows[:a], rows[a:]
        self.counters["pset_insertions"] -= len(rows)
        out = []
        if s >= g:
            self._new_group(g, bottom)
            out.append(g)
        if s < end:
            self._new_group(s + 1, top)
            out.append(s + 1)
        return out

    # -- extraction -------------------------------------------------------
    def ensure_bound_and_get(self) -> int:
        if not self.H:
            raise ContractError("no pending columns")
        if self.n_active == 0:
            raise ContractError("no active rows")
        self.counters["ensures"] += 1
        c, key = self.H.extract_min()
        g = self.group_of(c)
        end = self._end(g)
        star = self.current_min_row(c)
        rows = self._drop_group(g)
        created = []
        if g < c:
            self._new_group(g, [p for p in rows if p >= star])
            created.append(g)
        self._new_group(c, [star])
        self.done[c] = star
        if c < end:
            self._new_group(c + 1, [p for p in rows if p <= star])
            created.append(c + 1)
        # splitting only duplicates the row that owns the extracted minimum
        self.counters["pset_insertions"] -= len(rows)
        for h in created:
            self._restore_heap(h)
        return c

    def minimum_of(self, c: int):
        """Reported minimum of a done column, ``None`` otherwise."""
        if c not in self.done:
            return None
        return self.entry(self.done[c], c)

    # -- diagnostics -------------------------------------------------------
    def check_invariants(self, tol: float = 0.0) -> InvariantReport:
        rep = InvariantReport()
        bad = rep.problems.append
        if self._array is None:
            self._array = self.base.to_array()
        act = [r for r in range(self.k) if self.d[r] is not None]
        pending = set(c for c, _ in self.H.items())
        if set(self.done) & pending:
            bad("done column still queued")
        if len(self.done) + len(pending) != self.l:
            bad("columns lost from the queue")
        if not act:
            if self.F:
                bad("groups exist before any activation")
            if any(k != INF for _, k in self.H.items()):
                bad("finite key without active rows")
            return rep
        offs = np.array([self.d[r] for r in act], dtype=float)
        sub = self._array[act] + offs[:, None]
        colmin = sub.min(axis=0)
        pos = {r: t for t, r in enumerate(act)}
        if not self.F or self.F[0] != 0:
            bad("groups do not start at column 0")
        prev_rows = None
        seen = Counter()
        for g, e, rows, is_done in self.groups():
            if not rows:
                bad(f"group {g} has an empty potential set")
                continue
            seen.update(rows)
            if any(self.d[p] is None for p in rows):
                bad(f"group {g} holds an inactive row")
                continue
            if not is_done and len(rows) >= 2 * self.alpha:
                bad(f"P.2 violated in group {g}: {len(rows)} rows")
            psub = sub[[pos[p] for p in rows], g:e + 1].min(axis=0)
            if np.any(np.abs(psub - colmin[g:e + 1]) > tol):
                bad(f"P.1 violated in group {g}")
            if prev_rows is not None and min(prev_rows) < max(rows):
                bad(f"P.3 violated at group {g}")
            prev_rows = rows
            if is_done:
                if e != g or len(rows) != 1:
                    bad(f"done group {g} is not a singleton")
                continue
            keys = [self.H.key(c) for c in range(g, e + 1) if c in pending]
            if len(keys) != e - g + 1:
                bad(f"group {g} mixes done and pending columns")
                continue
            karr = np.array(keys, dtype=float)
            if np.any(karr < colmin[g:e + 1] - tol):
                bad(f"H.1 violated in group {g}")
            if not np.any(np.abs(karr - colmin[g:e + 1].min()) <= tol):
                bad(f"H.2 violated in group {g}")
        if set(seen) != set(self.U) or any(len(self.member[r]) != n for r, n in seen.items()):
            bad("row membership index out of sync")
        return rep
