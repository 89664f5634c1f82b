"""Subrow minimum queries on a fixed Monge matrix.

A query ``(r, a, b)`` asks for a column of ``{a..b}`` minimizing row ``r``.
Offsets added per row never change the answer column, so the online
structures query the base matrix and add their own offsets afterwards.
"""
from __future__ import annotations

from .monge import MongeView, smawk_rows

SCAN = "scan"
SPARSE = "sparse-table"
SHORT = "short-window"
MODES = (SCAN, SPARSE, SHORT)


class QueryError(ValueError):
    pass


class SubrowOracle:
    """Answers ``subrow_min(r, a, b)`` on ``base``.

    * ``scan``: no preprocessing, O(b - a + 1) per query.
    * ``sparse-table``: per-row power-of-two argmin tables, O(1) per query.
    * ``short-window``: argmin tables only for power-of-two windows up to
      ``window`` columns, built by running SMAWK on every window matrix;
      longer queries are rejected.
    """

    def __init__(self, base: MongeView, mode: str = SCAN, window: int | None = None):
        if mode not in MODES:
            raise ValueError(f"unknown oracle mode {mode!r}")
        if mode == SHORT and (window is None or window < 1):
            raise ValueError("short-window mode needs window >= 1")
        self.base = base
        self.mode = mode
        self.window = window
        self.queries = 0
        self._tables: list[list[list[int]]] = []
        if mode == SPARSE:
            self._build_sparse()
        elif mode == SHORT:
            self._build_windows()

    def _lo(self, r: int) -> int:
        return self.base.col_range(r)[0]

    def _build_sparse(self):
        val = self.base.value
        levels = [[list(range(self.base.l)) for _ in range(self.base.k)]]
        width = 1
        while 2 * width <= self.base.l:
            prev = levels[-1]
            cur = []
            for r in range(self.base.k):
                lo, hi = self.base.col_range(r)
                row = prev[r][:]
                for a in range(lo, hi - 2 * width + 2):
                    x, y = prev[r][a], prev[r][a + width]
                    row[a] = y if val(r, y) <= val(r, x) else x
                cur.append(row)
            levels.append(cur)
            width *= 2
        self._tables = levels

    def _build_windows(self):
        base = self.base
        levels = [[list(range(base.l)) for _ in range(base.k)]]
        width = 2
        while width <= min(self.window, base.l):
            table = [list(range(base.l)) for _ in range(base.k)]
            for a in range(base.l - width + 1):
                cols = list(range(a, a + width))
                rows = [r for r in range(base.k)
                        if base.col_range(r)[0] <= a and a + width - 1 <= base.col_range(r)[1]]
                if not rows:
                    continue
                # row minima of the window are column minima of its transpose
                arg = smawk_rows(lambda c, r: base.value(r, c), cols, rows)
                for r in rows:
                    table[r][a] = arg[r]
            levels.append(table)
            width *= 2
        self._tables = levels

    def subrow_min(self, r: int, a: int, b: int) -> tuple[int, float]:
        if a > b:
            raise QueryError(f"empty query range [{a}, {b}]")
        lo, hi = self.base.col_range(r)
        if a < lo or b > hi:
            raise QueryError(f"query ({r}, {a}, {b}) leaves the defined domain")
        self.queries += 1
        val = self.base.value
        span = b - a + 1
        if self.mode == SCAN:
            best, bv = a, val(r, a)
            for c in range(a + 1, b + 1):
                v = val(r, c)
                if v < bv:
                    best, bv = c, v
            return best, bv
        if self.mode == SHORT and span > self.window:
            raise QueryError(f"span {span} exceeds window {self.window}")
        u = span.bit_length() - 1
        table = self._tables[u][r]
        x, y = table[a], table[b - (1 << u) + 1]
        vx, vy = val(r, x), val(r, y)
        return (x, vx) if vx <= vy else (y, vy)


def build_oracle(m: MongeView, mode: str = SCAN, window: int | None = None) -> SubrowOracle:
    return SubrowOracle(m, mode, window)


class ShiftedOracle:
    """Oracle on a subrectangle ``[r0.., c0..]`` of a larger oracle's matrix."""

    def __init__(self, parent: SubrowOracle, r0: int, c0: int):
        self.parent = parent
        self.r0 = r0
        self.c0 = c0

    @property
    def queries(self):
        return self.parent.queries

    def subrow_min(self, r: int, a: int, b: int) -> tuple[int, float]:
        c, v = self.parent.subrow_min(r + self.r0, a + self.c0, b + self.c0)
        return c - self.c0, v
