"""Shared test oracles, independent of the library's DP code."""

from __future__ import annotations

import numpy as np

from tswarp import TimeSeries

INF = float("inf")


def brute_force_min_cost(s: TimeSeries, q: TimeSeries) -> float:
    """Minimum warping-path cost by exhaustive path enumeration.

    Depth-first over every monotone, continuous path from (1,1) to
    (n,m); only branch pruning on the running best, which cannot drop
    the optimum because local costs are non-negative.
    """
    sv = s.values.tolist()
    qv = q.values.tolist()
    n = len(sv)
    m = len(qv)
    best = [INF]

    def go(i: int, j: int, acc: float) -> None:
        d = sv[i] - qv[j]
        acc += d * d
        if acc >= best[0]:
            return
        if i == n - 1 and j == m - 1:
            best[0] = acc
            return
        if i + 1 < n and j + 1 < m:
            go(i + 1, j + 1, acc)
        if i + 1 < n:
            go(i + 1, j, acc)
        if j + 1 < m:
            go(i, j + 1, acc)

    go(0, 0, 0.0)
    return best[0]


def path_cost(path, s: TimeSeries, q: TimeSeries) -> float:
    """Sum of local costs along a path; for cross-checking raw_cost."""
    sv = s.values
    qv = q.values
    total = 0.0
    for i, j in path:
        d = float(sv[i - 1]) - float(qv[j - 1])
        total += d * d
    return total


def random_pair(
    rng: np.random.Generator,
    max_len: int = 8,
    min_len: int = 1,
    integers: bool = False,
) -> tuple[TimeSeries, TimeSeries]:
    """A random (possibly unequal-length) series pair."""
    n = int(rng.integers(min_len, max_len + 1))
    m = int(rng.integers(min_len, max_len + 1))
    if integers:
        a = rng.integers(-5, 6, size=n).astype(float)
        b = rng.integers(-5, 6, size=m).astype(float)
    else:
        a = rng.normal(size=n)
        b = rng.normal(size=m)
    return TimeSeries("a", a), TimeSeries("b", b)
