"""Banded dynamic time warping.

Restricts the DP to a band of the given width around the (slope
adjusted) matrix diagonal.  Cheaper than the full matrix, but the
result is only optimal when the optimal path happens to stay inside
the band.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import AlignmentResult, TimeSeries, WarpingPath, normalized_distance

__all__ = [
    "BandSpec",
    "BandDisconnectedError",
    "dtw_band",
    "min_connecting_width",
]

_INF = float("inf")


@dataclass(frozen=True)
class BandSpec:
    """Maximum deviation, in cells, from the stretched diagonal i = j*(n/m)."""

    width: int

    def __post_init__(self):
        if self.width < 0:
            raise ValueError("band width must be >= 0")


class BandDisconnectedError(RuntimeError):
    """The band is too narrow to connect (1,1) with (n,m)."""

    def __init__(self, width: int, min_width: int):
        self.width = width
        self.min_width = min_width
        super().__init__(
            f"band width {width} disconnects the matrix; "
            f"minimal connecting width is {min_width}"
        )


def _row_range(j: int, n: int, m: int, width: int) -> tuple[int, int]:
    """Inclusive 1-based row range of in-band cells in column j.

    Membership is |i - j*(n/m)| <= width, evaluated in exact integer
    arithmetic as |i*m - j*n| <= width*m.
    """
    lo = -(-(j * n - width * m) // m)  # ceil
    hi = (j * n + width * m) // m
    return max(1, lo), min(n, hi)


def _open_rows(j: int, n: int, m: int, width: int) -> tuple[int, int, bool, bool]:
    """Row range plus whether a corner cell is force-included in column j."""
    lo, hi = _row_range(j, n, m, width)
    corner_start = j == 1 and not (lo <= 1 <= hi)
    corner_end = j == m and not (lo <= n <= hi)
    return lo, hi, corner_start, corner_end


def _connected(n: int, m: int, width: int) -> bool:
    """Reachability of (n,m) from (1,1) through in-band cells.

    Boolean twin of the cost DP: same cells, same moves.
    """
    prev = np.zeros(n + 2, dtype=bool)
    for j in range(1, m + 1):
        lo, hi, corner_start, corner_end = _open_rows(j, n, m, width)
        rows = list(range(lo, hi + 1))
        if corner_start:
            rows.insert(0, 1)
        if corner_end:
            rows.append(n)
        cur = np.zeros(n + 2, dtype=bool)
        for i in rows:
            if i == 1 and j == 1:
                cur[1] = True
            else:
                cur[i] = prev[i] or prev[i - 1] or cur[i - 1]
        prev = cur
    return bool(prev[n])


def min_connecting_width(n: int, m: int) -> int:
    """Smallest band width for which (1,1) and (n,m) stay connected."""
    for w in range(0, max(n, m) + 1):
        if _connected(n, m, w):
            return w
    return max(n, m)


def dtw_band(s: TimeSeries, q: TimeSeries, band: BandSpec) -> AlignmentResult:
    """DTW restricted to the band; out-of-band cells are never opened.

    The corner cells (1,1) and (n,m) are always evaluated even if the
    centered band misses them on strongly non-square matrices, so a
    too-narrow band fails with a typed disconnection error rather than
    silently returning an infinite cost.
    """
    start = time.perf_counter()
    sv = s.values.tolist()
    qv = q.values.tolist()
    n = len(sv)
    m = len(qv)
    width = band.width
    D = np.full((n + 1, m + 1), _INF)
    computed = 0
    for j in range(1, m + 1):
        lo, hi, corner_start, corner_end = _open_rows(j, n, m, width)
        rows = list(range(lo, hi + 1))
        if corner_start:
            rows.insert(0, 1)
        if corner_end:
            rows.append(n)
        qj = qv[j - 1]
        for i in rows:
            d = sv[i - 1] - qj
            d = d * d
            if i == 1 and j == 1:
                D[1, 1] = d
            else:
                best = D[i - 1, j - 1]
                v = D[i - 1, j]
                if v < best:
                    best = v
                v = D[i, j - 1]
                if v < best:
                    best = v
                D[i, j] = d + best
            computed += 1
    raw = float(D[n, m])
    if raw == _INF:
        raise BandDisconnectedError(width, min_connecting_width(n, m))
    # Backtrack with the same tie-breaking as the full algorithm.
    i, j = n, m
    rev = [(i, j)]
    while i > 1 or j > 1:
        if i == 1:
            j -= 1
        elif j == 1:
            i -= 1
        else:
            diag = D[i - 1, j - 1]
            vert = D[i - 1, j]
            horz = D[i, j - 1]
            if diag <= vert and diag <= horz:
                i -= 1
                j -= 1
            elif vert <= horz:
                i -= 1
            else:
                j -= 1
        rev.append((i, j))
    path = WarpingPath(reversed(rev))
    elapsed = time.perf_counter() - start
    return AlignmentResult(
        path=path,
        raw_cost=raw,
        normalized_distance=normalized_distance(raw, path.K),
        computed_cells=computed,
        elapsed=elapsed,
        algorithm_params={"algorithm": "band", "width": width},
    )
