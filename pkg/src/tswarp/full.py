"""Exact full-matrix dynamic time warping.

Fills the dense n x m cumulative-cost matrix and backtracks the optimal
warping path.  This is the correctness baseline the other algorithms are
measured against; it is deliberately the space-hungry one.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import AlignmentResult, TimeSeries, WarpingPath, normalized_distance

__all__ = [
    "CostMatrix",
    "MatrixBudgetError",
    "DENSE_CELL_BUDGET",
    "cost_matrix",
    "backtrack",
    "dtw_full",
]

# Refuse dense matrices beyond this many cells unless the caller raises
# the limit explicitly.  Mirrors the point where the dense baseline
# stops being usable on ordinary hardware.
DENSE_CELL_BUDGET = 16_000_000


class MatrixBudgetError(RuntimeError):
    """The dense cost matrix would exceed the configured cell budget."""


@dataclass(frozen=True)
class CostMatrix:
    """Dense cumulative-cost matrix, 0-based ndarray inside."""

    cells: np.ndarray

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    @property
    def m(self) -> int:
        return self.cells.shape[1]


def cost_matrix(s: TimeSeries, q: TimeSeries) -> CostMatrix:
    """Fill the cumulative matrix D with the three-way recursion.

    The first row and column are cumulative sums of local costs, so
    D(n, m) is the minimum path cost over all valid warping paths.
    """
    sv = s.values.tolist()
    qv = q.values.tolist()
    n = len(sv)
    m = len(qv)
    D = np.empty((n, m))
    # First column.
    q0 = qv[0]
    cur = [0.0] * n
    acc = 0.0
    for i in range(n):
        d = sv[i] - q0
        acc += d * d
        cur[i] = acc
    D[:, 0] = cur
    prev = cur
    for j in range(1, m):
        qj = qv[j]
        cur = [0.0] * n
        d = sv[0] - qj
        up = cur[0] = d * d + prev[0]
        diag = prev[0]
        for i in range(1, n):
            left = prev[i]
            best = diag if diag < left else left
            if up < best:
                best = up
            d = sv[i] - qj
            up = cur[i] = d * d + best
            diag = left
        D[:, j] = cur
        prev = cur
    return CostMatrix(D)


def backtrack(D: CostMatrix) -> WarpingPath:
    """Walk the filled matrix from (n, m) back to (1, 1).

    On ties the diagonal predecessor wins, then the vertical one, then
    the horizontal one; this keeps output deterministic and favours
    shorter paths.
    """
    cells = D.cells
    n, m = cells.shape
    i, j = n - 1, m - 1
    rev = [(i + 1, j + 1)]
    while i > 0 or j > 0:
        if i == 0:
            j -= 1
        elif j == 0:
            i -= 1
        else:
            diag = cells[i - 1, j - 1]
            vert = cells[i - 1, j]
            horz = cells[i, j - 1]
            if diag <= vert and diag <= horz:
                i -= 1
                j -= 1
            elif vert <= horz:
                i -= 1
            else:
                j -= 1
        rev.append((i + 1, j + 1))
    return WarpingPath(reversed(rev))


def dtw_full(
    s: TimeSeries,
    q: TimeSeries,
    max_cells: int = DENSE_CELL_BUDGET,
) -> AlignmentResult:
    """Optimal alignment via the dense cumulative matrix."""
    n = len(s)
    m = len(q)
    if n * m > max_cells:
        raise MatrixBudgetError(
            f"dense matrix needs {n * m} cells, budget is {max_cells}; "
            "raise max_cells to force the computation"
        )
    start = time.perf_counter()
    D = cost_matrix(s, q)
    path = backtrack(D)
    elapsed = time.perf_counter() - start
    raw = float(D.cells[n - 1, m - 1])
    return AlignmentResult(
        path=path,
        raw_cost=raw,
        normalized_distance=normalized_distance(raw, path.K),
        computed_cells=n * m,
        elapsed=elapsed,
        algorithm_params={"algorithm": "full"},
    )
