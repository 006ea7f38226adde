import math

import numpy as np
import pytest

from vineopt.fitness import evaluate
from vineopt.geometry import (
    CircleObstacle,
    Point2,
    SegmentGeom,
    make_pose,
    point_segment_distance,
    segment_circle_intersects,
)
from vineopt.model import Bounds, Solution, Task
from vineopt.oracle import (
    GRID_EVALUATION_CAP,
    GridSpec,
    comparator_rank,
    grid_resolution_bound,
    grid_search_ik,
    point_segment_distance_sampled,
    sweep_collision,
)
from vineopt.ranking import BinSizes, FitnessRecord, rank_partition


def random_records(rng, count):
    records = []
    for _ in range(count):
        records.append(
            FitnessRecord(
                f12_binned=0.0,
                f31a=int(rng.integers(0, 4)),
                f33=float(rng.choice([0.0, 25.0, 50.0, 75.0])),
                f31b=int(rng.integers(1, 5)),
                f32_binned=0.0,
                # Coarse grids force plenty of exact ties in every column.
                f12_raw=float(rng.integers(0, 12)) * 0.4,
                f32_raw=float(rng.integers(0, 10)) * 1.7,
            )
        )
    return records


class TestComparatorRank:
    def test_agrees_with_fast_ranking_on_random_populations(self):
        rng = np.random.default_rng(7)
        for trial in range(30):
            records = random_records(rng, 60)
            rank_partition(records)
            assert [r.rank for r in records] == comparator_rank(records)

    def test_agrees_under_non_default_bins(self):
        rng = np.random.default_rng(11)
        bins = BinSizes(bin_f12=0.25, bin_f32=3.0)
        records = random_records(rng, 80)
        rank_partition(records, bins)
        assert [r.rank for r in records] == comparator_rank(records, bins)

    def test_ranks_are_a_permutation(self):
        rng = np.random.default_rng(3)
        records = random_records(rng, 25)
        assert sorted(comparator_rank(records)) == list(range(1, 26))

    def test_full_tie_breaks_toward_earlier_record(self):
        a = FitnessRecord(0.0, 1, 0.0, 1, 0.0, f12_raw=1.0, f32_raw=2.0)
        b = FitnessRecord(0.0, 1, 0.0, 1, 0.0, f12_raw=1.0, f32_raw=2.0)
        assert comparator_rank([a, b]) == [1, 2]


def desk_task(n_max=2, lengths=(0.5, 2.0), theta=(-math.pi / 3, math.pi / 3)):
    return Task(
        home=make_pose(0.0, 0.0, 0.0),
        targets=(make_pose(2.0, 0.0, 0.0),),
        obstacles=(),
        bounds=Bounds(n_max, theta, lengths),
    )


class TestGridSearch:
    def test_finds_exact_zero_on_axis_target(self):
        # The straight two-link genotype with a 2.0 first link puts a node
        # exactly on the approach line with zero residual projection, so the
        # optimum is on the grid and the search must land on it.
        result = grid_search_ik(desk_task(), GridSpec(angle_steps=5, max_links=2))
        assert result.best.penalized_f12 == pytest.approx(0.0, abs=1e-12)

    def test_evaluation_count(self):
        spec = GridSpec(angle_steps=3, max_links=2, length_steps=4)
        result = grid_search_ik(desk_task(), spec)
        # 4^2 length combos x 3 rows (the first joint is pinned straight,
        # so only joint 2 contributes an angle axis) x 1 target
        assert result.evaluations == 16 * 3

    def test_beats_random_solutions(self):
        task = desk_task()
        result = grid_search_ik(task, GridSpec(angle_steps=7, max_links=2))
        rng = np.random.default_rng(0)
        lo, hi = task.bounds.length_range
        for _ in range(50):
            row = [0.0, float(rng.uniform(*task.bounds.joint_domain(2)))]
            lengths = list(rng.uniform(lo, hi, size=2))
            random_result = evaluate(Solution([row], lengths), task)
            assert result.best.penalized_f12 <= random_result.penalized_f12 + 1e-12

    def test_cap_guards_explosion(self):
        with pytest.raises(ValueError, match="cap"):
            grid_search_ik(
                desk_task(n_max=4),
                GridSpec(angle_steps=60, max_links=4, length_steps=12),
            )
        assert GRID_EVALUATION_CAP == 10_000_000

    def test_rejects_silly_specs(self):
        with pytest.raises(ValueError):
            GridSpec(angle_steps=1, max_links=2)
        with pytest.raises(ValueError):
            GridSpec(angle_steps=5, max_links=5)
        with pytest.raises(ValueError):
            GridSpec(angle_steps=5, max_links=2, length_steps=0)

    def test_resolution_bound_shrinks_with_finer_grids(self):
        task = desk_task()
        coarse = grid_resolution_bound(task, GridSpec(angle_steps=3, max_links=2))
        fine = grid_resolution_bound(task, GridSpec(angle_steps=9, max_links=2))
        finest = grid_resolution_bound(
            task, GridSpec(angle_steps=33, max_links=2, length_steps=17)
        )
        assert coarse > fine > finest > 0.0


class TestSweepCollision:
    def test_matches_exact_predicate_one_way(self):
        rng = np.random.default_rng(42)
        for _ in range(300):
            node = Point2(float(rng.uniform(-5, 5)), float(rng.uniform(-5, 5)))
            heading = float(rng.uniform(-math.pi, math.pi))
            length = float(rng.uniform(0.2, 6.0))
            obs = CircleObstacle(
                Point2(float(rng.uniform(-5, 5)), float(rng.uniform(-5, 5))),
                float(rng.uniform(0.3, 2.0)),
            )
            end = Point2(
                node.x + length * math.cos(heading),
                node.y + length * math.sin(heading),
            )
            exact = segment_circle_intersects(SegmentGeom(node, end), obs)
            swept = sweep_collision(node, heading, length, obs)
            if swept:
                # A sampled interior point is a genuine crossing.
                assert exact >= 1
            if not exact:
                assert not swept

    def test_detects_clear_penetration(self):
        obs = CircleObstacle(Point2(2.0, 0.0), 0.5)
        assert sweep_collision(Point2(0.0, 0.0), 0.0, 4.0, obs)

    def test_misses_grazing_tangent(self):
        # The tangent line touches but never enters the open disc; the sweep
        # (strict interior test) must stay quiet even though the exact
        # predicate reports the touch point.
        obs = CircleObstacle(Point2(2.0, 1.0), 1.0)
        assert not sweep_collision(Point2(0.0, 0.0), 0.0, 4.0, obs)
        exact = segment_circle_intersects(
            SegmentGeom(Point2(0.0, 0.0), Point2(4.0, 0.0)), obs
        )
        assert exact == 1

    def test_requires_dense_sampling(self):
        obs = CircleObstacle(Point2(0.0, 0.0), 1.0)
        with pytest.raises(ValueError):
            sweep_collision(Point2(-2.0, 0.0), 0.0, 4.0, obs, samples=999)


class TestSampledDistance:
    def test_matches_exact_on_random_cases(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            p = Point2(float(rng.uniform(-10, 10)), float(rng.uniform(-10, 10)))
            v1 = Point2(float(rng.uniform(-10, 10)), float(rng.uniform(-10, 10)))
            v2 = Point2(float(rng.uniform(-10, 10)), float(rng.uniform(-10, 10)))
            if math.hypot(v2.x - v1.x, v2.y - v1.y) < 1e-6:
                continue
            exact = point_segment_distance(p, v1, v2)
            sampled = point_segment_distance_sampled(p, v1, v2, samples=20_000)
            assert sampled == pytest.approx(exact, abs=1e-6)

    def test_interior_minimum(self):
        d = point_segment_distance_sampled(
            Point2(1.0, 2.0), Point2(0.0, 0.0), Point2(3.0, 0.0)
        )
        assert d == pytest.approx(2.0, abs=1e-9)

    def test_endpoint_minimum(self):
        d = point_segment_distance_sampled(
            Point2(-3.0, 4.0), Point2(0.0, 0.0), Point2(3.0, 0.0)
        )
        assert d == pytest.approx(5.0, abs=1e-9)
