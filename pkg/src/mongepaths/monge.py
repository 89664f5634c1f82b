"""Lazily evaluated Monge matrices, SMAWK and brute-force column minima.

Rows and columns are addressed by position: row ``0`` is the topmost row and
column ``0`` the leftmost one.  A matrix is Monge when every defined 2x2
submatrix satisfies::

    M[r2, c1] + M[r1, c2] <= M[r1, c1] + M[r2, c2]      (r1 < r2, c1 < c2)

so bottommost column minima move upwards (weakly) from left to right.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

INF = math.inf

RECT = "rectangular"
STAIRCASE = "staircase"
FLIPPED = "flipped-staircase"
SHAPES = (RECT, STAIRCASE, FLIPPED)


class UndefinedEntryError(LookupError):
    """Raised when an entry outside of the defined domain is accessed."""


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class ColumnMinimum:
    col: int
    row: int | None
    value: float


class MongeView:
    """Immutable matrix whose entries are produced on demand.

    ``get(i, j)`` supplies base entries.  Optional per-row and per-column
    offsets are added at access time and never materialized.
    """

    __slots__ = ("k", "l", "shape", "_get", "row_offsets", "col_offsets", "rows", "cols")

    def __init__(
        self,
        get: Callable[[int, int], float],
        k: int,
        l: int,
        shape: str = RECT,
        row_offsets: Sequence[float] | None = None,
        col_offsets: Sequence[float] | None = None,
        rows: Sequence | None = None,
        cols: Sequence | None = None,
    ):
        if shape not in SHAPES:
            raise ShapeError(f"unknown shape {shape!r}")
        if shape != RECT and k != l:
            raise ShapeError(f"{shape} matrix must be square, got {k}x{l}")
        if row_offsets is not None and len(row_offsets) != k:
            raise ValueError("row offsets must cover every row")
        if col_offsets is not None and len(col_offsets) != l:
            raise ValueError("column offsets must cover every column")
        self.k = k
        self.l = l
        self.shape = shape
        self._get = get
        self.row_offsets = row_offsets
        self.col_offsets = col_offsets
        self.rows = tuple(rows) if rows is not None else tuple(range(k))
        self.cols = tuple(cols) if cols is not None else tuple(range(l))

    @classmethod
    def from_table(cls, table, shape: str = RECT, **kw) -> "MongeView":
        rows = [list(r) for r in table]
        k = len(rows)
        l = len(rows[0]) if k else 0
        if any(len(r) != l for r in rows):
            raise ValueError("ragged table")
        return cls(lambda i, j: rows[i][j], k, l, shape, **kw)

    def __repr__(self):
        return f"MongeView({self.shape}, {self.k}x{self.l})"

    def defined(self, i: int, j: int) -> bool:
        if not (0 <= i < self.k and 0 <= j < self.l):
            return False
        if self.shape == STAIRCASE:
            return i <= j
        if self.shape == FLIPPED:
            return i >= j
        return True

    def col_range(self, i: int) -> tuple[int, int]:
        """Inclusive range of columns defined in row ``i``."""
        if self.shape == STAIRCASE:
            return i, self.l - 1
        if self.shape == FLIPPED:
            return 0, i
        return 0, self.l - 1

    def row_range(self, j: int) -> tuple[int, int]:
        """Inclusive range of rows defined in column ``j``."""
        if self.shape == STAIRCASE:
            return 0, j
        if self.shape == FLIPPED:
            return j, self.k - 1
        return 0, self.k - 1

    def value(self, i: int, j: int) -> float:
        # unchecked fast path; callers stay inside the domain
        v = self._get(i, j)
        if self.row_offsets is not None:
            v = v + self.row_offsets[i]
        if self.col_offsets is not None:
            v = v + self.col_offsets[j]
        return v

    def entry(self, i: int, j: int) -> float:
        if not self.defined(i, j):
            raise UndefinedEntryError(f"entry ({i}, {j}) undefined in {self!r}")
        return self.value(i, j)

    def __getitem__(self, ij):
        return self.entry(*ij)

    def to_array(self) -> np.ndarray:
        """Float array with ``nan`` on undefined cells."""
        a = np.full((self.k, self.l), np.nan)
        for i in range(self.k):
            lo, hi = self.col_range(i)
            for j in range(lo, hi + 1):
                a[i, j] = self.value(i, j)
        return a

    def to_table(self) -> list[list]:
        return [
            [self.value(i, j) if self.defined(i, j) else None for j in range(self.l)]
            for i in range(self.k)
        ]

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "MongeView":
        """Rectangular selection of rows and columns (kept in order)."""
        row_idx = list(row_idx)
        col_idx = list(col_idx)
        if any(not self.defined(i, j) for i in row_idx for j in col_idx):
            raise UndefinedEntryError("submatrix must be fully defined")
        return MongeView(
            lambda i, j: self.value(row_idx[i], col_idx[j]),
            len(row_idx),
            len(col_idx),
            RECT,
            rows=[self.rows[i] for i in row_idx],
            cols=[self.cols[j] for j in col_idx],
        )

    def subrectangle(self, r0: int, r1: int, c0: int, c1: int) -> "MongeView":
        return self.submatrix(range(r0, r1 + 1), range(c0, c1 + 1))

    def transpose(self) -> "MongeView":
        shape = {RECT: RECT, STAIRCASE: FLIPPED, FLIPPED: STAIRCASE}[self.shape]
        return MongeView(lambda i, j: self.value(j, i), self.l, self.k, shape,
                         rows=self.cols, cols=self.rows)

    def reversed(self) -> "MongeView":
        """Both index orders reversed; staircase and flipped swap."""
        k, l = self.k, self.l
        shape = {RECT: RECT, STAIRCASE: FLIPPED, FLIPPED: STAIRCASE}[self.shape]
        return MongeView(lambda i, j: self.value(k - 1 - i, l - 1 - j), k, l, shape,
                         rows=self.rows[::-1], cols=self.cols[::-1])


def offset_view(m: MongeView, d) -> MongeView:
    """``off(m, d)``: adds ``d[i]`` to every entry of row ``i``.

    ``d`` may be a sequence or a callable on row positions.
    """
    offs = [d(i) for i in range(m.k)] if callable(d) else list(d)
    if len(offs) != m.k:
        raise ValueError("offset must be defined on every row")
    return MongeView(lambda i, j: m.value(i, j) + offs[i], m.k, m.l, m.shape,
                     rows=m.rows, cols=m.cols)


def is_monge(m: MongeView, tol: float = 0.0) -> bool:
    """Exhaustive check of the Monge inequality over defined quadruples.

    For a fixed row pair the inequality over all column pairs says the row
    difference ``M[r2, .] - M[r1, .]`` is non-decreasing across the columns
    where both rows are defined, which is checked directly.
    """
    a = m.to_array()
    k = m.k
    for r1 in range(k):
        for r2 in range(r1 + 1, k):
            both = ~(np.isnan(a[r1]) | np.isnan(a[r2]))
            diff = a[r2, both] - a[r1, both]
            if diff.size > 1 and np.any(np.diff(diff) < -tol):
                return False
    return True


def brute_column_minima(m: MongeView) -> list[ColumnMinimum]:
    """Per-column full scan; ties go to the bottommost row."""
    out = []
    if m.l == 0:
        return out
    a = m.to_array()
    for j in range(m.l):
        col = a[:, j]
        ok = ~np.isnan(col)
        if not ok.any():
            out.append(ColumnMinimum(j, None, INF))
            continue
        best = np.min(col[ok])
        rows = np.nonzero(ok & (col == best))[0]
        i = int(rows[-1])
        out.append(ColumnMinimum(j, i, m.value(i, j)))
    return out


def smawk_bottommost_minima(m: MongeView) -> list[ColumnMinimum]:
    """Bottommost column minima of a rectangular Monge matrix in O(k + l)."""
    if m.shape != RECT:
        raise ShapeError("SMAWK needs a rectangular matrix")
    if m.l == 0:
        return []
    if m.k == 0:
        return [ColumnMinimum(j, None, INF) for j in range(m.l)]
    rows = smawk_rows(m.value, list(range(m.k)), list(range(m.l)))
    return [ColumnMinimum(j, rows[j], m.value(rows[j], j)) for j in range(m.l)]


def smawk_rows(value: Callable[[int, int], float], rows: list[int], cols: list[int]) -> dict[int, int]:
    """Map each column to its bottommost minimizing row.

    ``rows`` and ``cols`` are given top-to-bottom and left-to-right; the
    submatrix they select must be Monge.
    """
    # Searched bottom-up the minimizer positions become non-decreasing, which
    # is the classical totally monotone setting with ties to the earlier row.
    return _smawk(value, rows[::-1], cols)


def _smawk(value, rows: list[int], cols: list[int]) -> dict[int, int]:
    if not cols:
        return {}
    # REDUCE: keep at most len(cols) rows that can still hold a minimum
    stack: list[int] = []
    for r in rows:
        while stack:
            c = cols[len(stack) - 1]
            if value(stack[-1], c) > value(r, c):
                stack.pop()
            else:
                break
        if len(stack) < len(cols):
            stack.append(r)
    result = _smawk(value, stack, cols[1::2])
    # INTERPOLATE the even columns between neighbouring odd answers
    pos = {r: i for i, r in enumerate(stack)}
    start = 0
    for ci in range(0, len(cols), 2):
        c = cols[ci]
        stop = pos[result[cols[ci + 1]]] if ci + 1 < len(cols) else len(stack) - 1
        best = stack[start]
        bv = value(best, c)
        for i in range(start + 1, stop + 1):
            v = value(stack[i], c)
            if v < bv:
                best, bv = stack[i], v
        result[c] = best
        start = pos[best]
    return result


def random_monge(k: int, l: int, seed: int, shape: str = RECT, *,
                 scale: int = 4, density: float = 0.35, floats: bool = False) -> MongeView:
    """Deterministic random Monge matrix.

    Entries are ``S[i][j] + g(i + j) + a[i] + b[j]`` where ``S`` is the 2-D
    prefix sum of a sparse non-negative field (so every mixed second
    difference is >= 0), ``g`` is a scaled convex parabola and ``a``/``b`` are
    random row/column offsets.  Small integer ranges keep ties frequent.
    Staircase shapes restrict the domain of the same construction.
    """
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    if shape != RECT and k != l:
        raise ShapeError(f"{shape} matrix must be square")
    rng = random.Random(seed)
    draw = (lambda hi: rng.uniform(0, hi)) if floats else (lambda hi: rng.randint(0, hi))
    w = [[draw(scale) if rng.random() < density else 0 for _ in range(l)] for _ in range(k)]
    pref = [[0] * l for _ in range(k)]
    for i in range(k):
        run = 0
        for j in range(l):
            run += w[i][j]
            pref[i][j] = run + (pref[i - 1][j] if i else 0)
    lam = rng.randint(0, 3) if not floats else rng.uniform(0, 3)
    centre = rng.randint(0, k + l)
    span = scale * max(k, l)
    a = [draw(2 * span) - span - pref[i][l // 2] for i in range(k)]
    b = [draw(2 * span) - span for _ in range(l)]
    table = [
        [pref[i][j] + lam * (i + j - centre) ** 2 + a[i] + b[j] for j in range(l)]
        for i in range(k)
    ]
    return MongeView.from_table(table, shape)


def anti_monge_fixture() -> MongeView:
    return MongeView.from_table([[0, 1], [1, 0]])


def dump_matrix(m: MongeView, fh) -> None:
    """Line format: ``shape k l`` header, then ``i j value`` per defined cell."""
    fh.write(f"{m.shape} {m.k} {m.l}\n")
    for i in range(m.k):
        lo, hi = m.col_range(i)
        for j in range(lo, hi + 1):
            fh.write(f"{i} {j} {m.value(i, j)!r}\n")


def _num(tok: str):
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def load_matrix(fh) -> MongeView:
    header = fh.readline().split()
    if len(header) != 3:
        raise ValueError("bad matrix header")
    shape, k, l = header[0], int(header[1]), int(header[2])
    table: list[list] = [[None] * l for _ in range(k)]
    for line in fh:
        if not line.strip():
            continue
        i, j, v = line.split()
        table[int(i)][int(j)] = _num(v)
    m = MongeView.from_table(table, shape) if k else MongeView(lambda i, j: INF, 0, l, shape)
    for i in range(m.k):
        lo, hi = m.col_range(i)
        if any(table[i][j] is None for j in range(lo, hi + 1)):
            raise ValueError(f"row {i} misses defined entries")
    return m


def materialize(m: MongeView) -> MongeView:
    """Copy the current entries into a table-backed view of the same shape."""
    t = m.to_table()
    return MongeView(lambda i, j: t[i][j], m.k, m.l, m.shape, rows=m.rows, cols=m.cols)


def condense(m: MongeView, row_blocks: Iterable[Sequence[int]], col_blocks: Iterable[Sequence[int]]) -> MongeView:
    """Block-minimum matrix of a rectangular view."""
    rb = [list(b) for b in row_blocks]
    cb = [list(b) for b in col_blocks]
    table = [[min(m.value(i, j) for i in R for j in C) for C in cb] for R in rb]
    return MongeView.from_table(table)
