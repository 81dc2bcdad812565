"""
Bipartite assignment solvers over sparse score matrices (maximisation).

``hungarian_max`` reduces to scipy's min-cost ``linear_sum_assignment`` on an
(n+m) x (n+m) matrix: negated scores in the top-left block, a large sentinel
for forbidden pairs, and zero-cost dummy slots that let any row or column stay
unmatched. Ties between optimal matchings are resolved deterministically: the matching
whose ascending (row, col) pair list is lexicographically smallest wins, so a
matching beats any extension of itself by zero-gain pairs.
``brute_force_max`` applies the same order and serves as oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

__all__ = [
    "ScoreMatrix",
    "Matching",
    "hungarian_max",
    "greedy_max",
    "brute_force_max",
    "BRUTE_FORCE_LIMIT",
]

BRUTE_FORCE_LIMIT = 9


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """Dense score array where NaN marks a forbidden (absent) pair."""

    scores: np.ndarray

    def __post_init__(self) -> None:
        s = np.array(self.scores, dtype=np.float64, copy=True)
        if s.ndim != 2:
            raise ValueError(f"score matrix must be 2-D, got shape {s.shape}")
        if np.isinf(s).any():
            raise ValueError("score matrix entries must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "scores", s)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Optional[float]]], n_cols: Optional[int] = None) -> "ScoreMatrix":
        """Build from nested lists, ``None`` meaning forbidden."""
        if n_cols is None:
            n_cols = len(rows[0]) if rows else 0
        arr = np.full((len(rows), n_cols), np.nan)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v is not None:
                    arr[i, j] = v
        return cls(arr)

    @classmethod
    def empty(cls, rows: int = 0, cols: int = 0) -> "ScoreMatrix":
        return cls(np.full((rows, cols), np.nan))

    @property
    def rows(self) -> int:
        return self.scores.shape[0]

    @property
    def cols(self) -> int:
        return self.scores.shape[1]

    @property
    def present(self) -> np.ndarray:
        return ~np.isnan(self.scores)


@dataclass(frozen=True)
class Matching:
    """Matched (row, col) pairs in ascending row order."""

    pairs: tuple[tuple[int, int], ...] = ()

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def total(self, matrix: ScoreMatrix) -> float:
        return float(sum(float(matrix.scores[r, c]) for r, c in self.pairs))

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


def _make_matching(pairs) -> Matching:
    return Matching(tuple(sorted((int(r), int(c)) for r, c in pairs)))


def _solve(scores: np.ndarray, present: np.ndarray) -> list[tuple[int, int]]:
    n, m = scores.shape
    if n == 0 or m == 0 or not present.any():
        return []
    max_abs = float(np.abs(scores[present]).max())
    sentinel = (n + m + 1) * (max_abs + 1.0)
    size = n + m
    cost = np.full((size, size), sentinel)
    cost[:n, :m] = np.where(present, -np.nan_to_num(scores), sentinel)
    cost[np.arange(n), m + np.arange(n)] = 0.0
    cost[n + np.arange(m), np.arange(m)] = 0.0
    cost[n:, m:] = 0.0
    r_idx, c_idx = linear_sum_assignment(cost)
    return [(int(r), int(c)) for r, c in zip(r_idx, c_idx) if r < n and c < m and present[r, c]]


def _pairs_total(scores: np.ndarray, pairs) -> float:
    return float(sum(float(scores[r, c]) for r, c in sorted(pairs)))


def _extend(
    scores: np.ndarray,
    present: np.ndarray,
    fixed: dict[int, int],
    row: int,
    col: int,
    used_cols: set[int],
) -> dict[int, int]:
    """``fixed`` plus (row, col) plus an optimal matching of the rows after ``row`` on the free columns."""
    n, m = scores.shape
    rest_rows = np.arange(row + 1, n)
    rest_cols = np.array([j for j in range(m) if j not in used_cols and j != col], dtype=np.int64)
    sub = _solve(scores[np.ix_(rest_rows, rest_cols)], present[np.ix_(rest_rows, rest_cols)])
    return {**fixed, row: col, **{int(rest_rows[i]): int(rest_cols[j]) for i, j in sub}}


def hungarian_max(matrix: ScoreMatrix) -> Matching:
    """
    Maximum-total matching over present entries.

    After one solve the pair list is fixed front to back. At each position the
    list may end if the pairs fixed so far already reach the optimum; otherwise
    every pair smaller than the next pair of the current optimal matching is
    tried and kept when an optimal completion of the later rows still reaches
    the optimal total.
    """
    scores, present = matrix.scores, matrix.present
    n, m = scores.shape
    current = dict(_solve(scores, present))
    best = _pairs_total(scores, current.items())
    tol = 1e-9 * max(1.0, abs(best))

    fixed: dict[int, int] = {}
    used_cols: set[int] = set()
    row = 0
    while row < n:
        if _pairs_total(scores, fixed.items()) >= best - tol:
            break
        later = [r for r in current if r >= row]
        if not later:
            break
        choice = (min(later), current[min(later)])
        for r in range(row, choice[0] + 1):
            found = False
            for c in range(m if r < choice[0] else choice[1]):
                if c in used_cols or not present[r, c]:
                    continue
                candidate = _extend(scores, present, fixed, r, c, used_cols)
                if _pairs_total(scores, candidate.items()) >= best - tol:
                    current, choice, found = candidate, (r, c), True
                    break
            if found:
                break
        fixed[choice[0]] = choice[1]
        used_cols.add(choice[1])
        row = choice[0] + 1
    return _make_matching(fixed.items())


def greedy_max(matrix: ScoreMatrix) -> Matching:
    """Repeatedly take the best remaining entry with a free row and column."""
    scores, present = matrix.scores, matrix.present
    rows, cols = np.nonzero(present)
    order = sorted(zip(rows.tolist(), cols.tolist()), key=lambda rc: (-scores[rc], rc[0], rc[1]))
    used_r: set[int] = set()
    used_c: set[int] = set()
    pairs = []
    for r, c in order:
        if r in used_r or c in used_c:
            continue
        used_r.add(r)
        used_c.add(c)
        pairs.append((r, c))
    return _make_matching(pairs)


def brute_force_max(matrix: ScoreMatrix) -> Matching:
    """Exhaustive search over all partial matchings; test oracle for small matrices with exact scores."""
    scores, present = matrix.scores, matrix.present
    n, m = scores.shape
    if max(n, m) > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_LIMIT}x{BRUTE_FORCE_LIMIT}, got {n}x{m}")
    allowed, values = present.tolist(), scores.tolist()

    best_total: Optional[float] = None
    best_pairs: tuple[tuple[int, int], ...] = ()
    chosen: list[tuple[int, int]] = []
    used = [False] * m

    # chosen grows in row order, so the running sum adds terms in the same order as _pairs_total
    def visit(r: int, total: float) -> None:
        nonlocal best_total, best_pairs
        if r == n:
            pairs = tuple(chosen)
            if best_total is None or total > best_total or (total == best_total and pairs < best_pairs):
                best_total = total
                best_pairs = pairs
            return
        for c in range(m):
            if used[c] or not allowed[r][c]:
                continue
            used[c] = True
            chosen.append((r, c))
            visit(r + 1, total + values[r][c])
            chosen.pop()
            used[c] = False
        visit(r + 1, total)

    visit(0, 0.0)
    return _make_matching(best_pairs)
