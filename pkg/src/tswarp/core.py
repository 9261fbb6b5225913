"""Core domain types shared by every alignment algorithm.

Indices in all public types are 1-based: the top-left matrix cell is
(1, 1) and the bottom-right cell is (n, m).  Implementations are free
to work 0-based internally, but everything that crosses a module
boundary uses the 1-based convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "TimeSeries",
    "QuantizedSeries",
    "WarpingPath",
    "PathVerdict",
    "AlignmentResult",
    "local_distance",
    "quantize",
    "validate_path",
    "normalized_distance",
]


@dataclass(frozen=True)
class TimeSeries:
    """A labelled, ordered sequence of finite scalar samples."""

    id: str
    values: np.ndarray

    def __init__(self, id: str, values: Sequence[float] | np.ndarray):
        arr = np.asarray(values, dtype=float)
        if arr.ndim != 1:
            raise ValueError("time series values must be one-dimensional")
        if arr.size < 1:
            raise ValueError(f"time series {id!r} is empty")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"time series {id!r} contains non-finite values")
        arr.setflags(write=False)
        object.__setattr__(self, "id", id)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return self.id == other.id and np.array_equal(self.values, other.values)


@dataclass(frozen=True)
class QuantizedSeries:
    """A series rescaled into [0, 1], with the original range retained.

    ``degenerate`` is set when the source series was constant; all
    samples then map to 0 by convention.
    """

    values: np.ndarray
    source_min: float
    source_max: float
    degenerate: bool = False


@dataclass(frozen=True)
class PathVerdict:
    valid: bool
    violation: str | None = None  # "boundary" | "monotonicity" | "continuity"

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class WarpingPath:
    """An ordered list of 1-based (i, j) matrix cells.

    ``K`` (the path length) is the normalizing factor used when turning
    a raw cumulative cost into a reported distance.
    """

    steps: tuple[tuple[int, int], ...]

    def __init__(self, steps: Iterable[tuple[int, int]]):
        object.__setattr__(
            self, "steps", tuple((int(i), int(j)) for i, j in steps)
        )

    @property
    def K(self) -> int:
        return len(self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


@dataclass(frozen=True)
class AlignmentResult:
    """Outcome of one alignment run.

    ``computed_cells`` counts every DP cell the algorithm evaluated; for
    the divide-and-conquer strategy this can exceed n*m because cells
    are recomputed across recursion levels.
    """

    path: WarpingPath
    raw_cost: float
    normalized_distance: float
    computed_cells: int
    elapsed: float
    algorithm_params: dict = field(default_factory=dict)


def local_distance(a: float, b: float) -> float:
    """Squared difference between two samples."""
    d = a - b
    return d * d


def quantize(s: TimeSeries) -> QuantizedSeries:
    """Rescale a series affinely onto [0, 1].

    The minimum sample maps to 0 and the maximum to 1.  A constant
    series has no usable range; it maps to all zeros and is flagged
    degenerate so callers can report it.
    """
    values = s.values
    lo = float(values.min())
    hi = float(values.max())
    if hi == lo:
        out = np.zeros_like(values)
        out.setflags(write=False)
        return QuantizedSeries(out, lo, hi, degenerate=True)
    out = (values - lo) / (hi - lo)
    out.setflags(write=False)
    return QuantizedSeries(out, lo, hi)


def validate_path(p: WarpingPath | Sequence[tuple[int, int]], n: int, m: int) -> PathVerdict:
    """Check the boundary, monotonicity and continuity constraints.

    Returns a verdict naming the first violated constraint, scanning the
    path front to back.
    """
    steps = list(p)
    if not steps or steps[0] != (1, 1):
        return PathVerdict(False, "boundary")
    for (pi, pj), (ci, cj) in zip(steps, steps[1:]):
        di = ci - pi
        dj = cj - pj
        if di < 0 or dj < 0:
            return PathVerdict(False, "monotonicity")
        if di > 1 or dj > 1 or (di == 0 and dj == 0):
            return PathVerdict(False, "continuity")
    if steps[-1] != (n, m):
        return PathVerdict(False, "boundary")
    return PathVerdict(True)


def normalized_distance(raw_cost: float, K: int) -> float:
    """sqrt of the cumulative cost, divided by the path length K."""
    if K < 1:
        raise ValueError("path length K must be >= 1")
    return math.sqrt(raw_cost) / K
