import numpy as np
import pytest

from helpers import path_cost, random_pair
from tswarp import (
    DCAlignmentResult,
    RecursionDepthError,
    SplitPoint,
    TimeSeries,
    backward_space_efficient,
    dc_align,
    dtw_full,
    forward_space_efficient,
    validate_path,
)
from tswarp.full import cost_matrix

S_FIXTURE = TimeSeries("s", [3, 4, 5, 3, 3])
Q_FIXTURE = TimeSeries("q", [1, 2, 2, 1, 0])


class TestSpaceEfficientSweeps:
    def test_forward_matches_dense_last_column(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            s, q = random_pair(rng, max_len=12, min_len=1)
            dense = cost_matrix(s, q).cells[:, -1]
            assert forward_space_efficient(s, q) == pytest.approx(
                dense.tolist()
            )

    def test_backward_matches_reversed_dense(self):
        rng = np.random.default_rng(14)
        for _ in range(20):
            s, q = random_pair(rng, max_len=12, min_len=1)
            rev = cost_matrix(
                TimeSeries("rs", s.values[::-1]),
                TimeSeries("rq", q.values[::-1]),
            ).cells[:, -1][::-1]
            assert backward_space_efficient(s, q) == pytest.approx(
                rev.tolist()
            )


class TestDcAlign:
    def test_first_split_point_on_fixture(self):
        r = dc_align(S_FIXTURE, Q_FIXTURE)
        assert isinstance(r, DCAlignmentResult)
        assert r.splits[0] == SplitPoint(4, 3)

    def test_suboptimal_on_fixture(self):
        dc = dc_align(S_FIXTURE, Q_FIXTURE)
        full = dtw_full(S_FIXTURE, Q_FIXTURE)
        assert dc.raw_cost > full.raw_cost
        assert list(dc.path) != list(full.path)

    def test_cost_never_below_optimum(self):
        rng = np.random.default_rng(15)
        for _ in range(30):
            s, q = random_pair(rng, max_len=20, min_len=1)
            dc = dc_align(s, q)
            full = dtw_full(s, q)
            assert dc.raw_cost >= full.raw_cost - 1e-9

    def test_reported_cost_is_cost_of_returned_path(self):
        rng = np.random.default_rng(16)
        for _ in range(20):
            s, q = random_pair(rng, max_len=20, min_len=1)
            dc = dc_align(s, q)
            assert validate_path(dc.path, len(s), len(q))
            assert dc.raw_cost == pytest.approx(path_cost(dc.path, s, q))

    def test_identical_series_recovers_diagonal(self):
        s = TimeSeries("s", np.sin(np.arange(50.0)))
        r = dc_align(s, s)
        assert r.raw_cost == pytest.approx(0.0)
        assert list(r.path) == [(i, i) for i in range(1, 51)]

    def test_invalid_mid_mode(self):
        with pytest.raises(ValueError):
            dc_align(S_FIXTURE, Q_FIXTURE, mid_mode="center")


class TestFloorMidpointPathology:
    def test_floor_mode_hits_depth_guard_on_constant_pair(self):
        s = TimeSeries("s", [0.0] * 5)
        q = TimeSeries("q", [0.0] * 3)
        with pytest.raises(RecursionDepthError, match="floor"):
            dc_align(s, q, mid_mode="floor")

    def test_ceil_mode_terminates_on_same_pair(self):
        s = TimeSeries("s", [0.0] * 5)
        q = TimeSeries("q", [0.0] * 3)
        r = dc_align(s, q, mid_mode="ceil")
        assert r.raw_cost == 0.0


class TestSpaceContract:
    def test_peak_storage_is_linear(self):
        rng = np.random.default_rng(17)
        n = 400
        s = TimeSeries("s", np.cumsum(rng.normal(size=n)))
        q = TimeSeries("q", np.cumsum(rng.normal(size=n)))
        r = dc_align(s, q)
        assert r.space is not None
        assert r.space.peak < 10 * (len(s) + len(q))
        assert r.space.current == 0  # everything freed

    def test_computed_cells_exceed_dense_due_to_recomputation(self):
        rng = np.random.default_rng(18)
        s = TimeSeries("s", rng.normal(size=64))
        q = TimeSeries("q", rng.normal(size=64))
        r = dc_align(s, q)
        assert r.computed_cells > 64 * 64
