"""Independent, slow reference implementations used to cross-check the fast
paths: a pairwise-comparator ranking, an exhaustive grid search over the
genotype space, swept-sample collision detection, and a sampled
point-to-segment distance. None of these share code with the modules they
check beyond the evaluation function itself.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from functools import cmp_to_key
from typing import Sequence

import numpy as np

from . import fitness
from .geometry import CircleObstacle, Point2
from .model import Solution, Task
from .ranking import BinSizes, FitnessRecord

GRID_EVALUATION_CAP = 10_000_000


def comparator_rank(
    records: Sequence[FitnessRecord], bins: BinSizes = BinSizes()
) -> list[int]:
    """Rank records with an explicit pairwise comparator instead of a key
    sort, reading only the raw fields and binning them independently.
    Returns ranks aligned with the input order; full ties break toward the
    earlier record."""

    def columns(rec: FitnessRecord):
        return (
            rec.f12_raw - math.fmod(rec.f12_raw, bins.bin_f12),
            rec.f31a,
            rec.f33,
            rec.f31b,
            rec.f32_raw - math.fmod(rec.f32_raw, bins.bin_f32),
            rec.f12_raw,
            rec.f32_raw,
        )

    def compare(i: int, j: int) -> int:
        for x, y in zip(columns(records[i]), columns(records[j])):
            if x < y:
                return -1
            if x > y:
                return 1
        return i - j

    order = sorted(range(len(records)), key=cmp_to_key(compare))
    ranks = [0] * len(records)
    for position, idx in enumerate(order, start=1):
        ranks[idx] = position
    return ranks


@dataclass(frozen=True)
class GridSpec:
    """Resolution of the exhaustive search: grid points per steerable joint,
    links in the genotype, and grid points per link length. Deliberately
    capped at desk scale — this is a checking oracle, not an optimizer."""

    angle_steps: int
    max_links: int
    length_steps: int = 5

    def __post_init__(self) -> None:
        if self.angle_steps < 2:
            raise ValueError("need at least 2 grid points per steerable joint")
        if not 1 <= self.max_links <= 4:
            raise ValueError("grid search is limited to 1..4 links")
        if self.length_steps < 1:
            raise ValueError("need at least 1 grid point per link length")


@dataclass
class GridResult:
    best: fitness.EvaluationResult
    evaluations: int
    resolution_bound: float


def _axis(lo: float, hi: float, steps: int) -> list[float]:
    if steps <= 1 or hi == lo:
        return [lo]
    return [lo + (hi - lo) * k / (steps - 1) for k in range(steps)]


def grid_resolution_bound(task: Task, spec: GridSpec) -> float:
    """Upper bound on how much the grid's best kinematic fitness can exceed
    the continuum optimum, assuming the optimum covers its target projection
    with slack at least the bound (so the shortfall term stays zero nearby).

    Any genotype has a grid neighbour within half a step per gene. A length
    step moves every node by at most s/2 per link; an angle step swings the
    chain by at most its reach. Node motion enters the fitness through the
    closest-node distance and through the projection, both 1-Lipschitz."""
    n = spec.max_links
    llo, lhi = task.bounds.length_range
    angle_step = 0.0
    for j in range(1, n + 1):
        dlo, dhi = task.bounds.joint_domain(j)
        if dhi > dlo and spec.angle_steps > 1:
            angle_step = max(angle_step, (dhi - dlo) / (spec.angle_steps - 1))
        elif dhi > dlo:
            angle_step = max(angle_step, dhi - dlo)
    if lhi > llo and spec.length_steps > 1:
        length_step = (lhi - llo) / (spec.length_steps - 1)
    elif lhi > llo:
        length_step = lhi - llo
    else:
        length_step = 0.0
    reach = n * lhi
    node_motion = n * (length_step / 2.0) + n * reach * (angle_step / 2.0)
    per_target = 2.0 * node_motion + n * (length_step / 2.0)
    return len(task.targets) * per_target


def grid_search_ik(task: Task, spec: GridSpec) -> GridResult:
    """Exhaustive search over the gridded genotype space.

    Link lengths are shared, so the search iterates length combinations and,
    for each, picks the best angle row per target independently (the
    penalized fitness separates over targets once lengths are fixed). Raises
    if the total evaluation count would exceed the cap."""
    n = spec.max_links
    llo, lhi = task.bounds.length_range
    length_axis = _axis(llo, lhi, spec.length_steps)
    angle_axes = []
    for j in range(1, n + 1):
        dlo, dhi = task.bounds.joint_domain(j)
        angle_axes.append(_axis(dlo, dhi, spec.angle_steps))
    rows = [list(combo) for combo in itertools.product(*angle_axes)]
    total = (len(length_axis) ** n) * len(rows) * len(task.targets)
    if total > GRID_EVALUATION_CAP:
        raise ValueError(
            f"grid of {total} evaluations exceeds the cap of {GRID_EVALUATION_CAP}"
        )
    sub_tasks = [replace(task, targets=(t,)) for t in task.targets]
    best_score = math.inf
    best_rows: list[list[float]] = []
    best_lengths: list[float] = []
    evaluations = 0
    for lengths in itertools.product(length_axis, repeat=n):
        lens = list(lengths)
        score = 0.0
        chosen: list[list[float]] = []
        for sub in sub_tasks:
            target_best = math.inf
            target_row = rows[0]
            for row in rows:
                result = fitness.evaluate(Solution([list(row)], list(lens)), sub)
                evaluations += 1
                if result.penalized_f12 < target_best:
                    target_best = result.penalized_f12
                    target_row = row
            score += target_best
            chosen.append(list(target_row))
        if score < best_score:
            best_score = score
            best_rows = chosen
            best_lengths = lens
    best = fitness.evaluate(Solution(best_rows, best_lengths), task)
    return GridResult(best, evaluations, grid_resolution_bound(task, spec))


def sweep_collision(
    node: Point2,
    heading: float,
    length: float,
    obs: CircleObstacle,
    samples: int = 2048,
) -> bool:
    """True when any of a dense set of points along the link grown from
    ``node`` at ``heading`` lies strictly inside the obstacle."""
    if samples < 1000:
        raise ValueError("sweep needs at least 1000 samples")
    step_x = length * math.cos(heading)
    step_y = length * math.sin(heading)
    r2 = obs.radius * obs.radius
    for k in range(samples + 1):
        t = k / samples
        dx = node.x + t * step_x - obs.center.x
        dy = node.y + t * step_y - obs.center.y
        if dx * dx + dy * dy < r2:
            return True
    return False


def point_segment_distance_sampled(
    p: Point2, v1: Point2, v2: Point2, samples: int = 100_000
) -> float:
    """Distance from p to the segment by dense sampling of the parameter,
    refined by a ternary search (the squared distance is convex in the
    parameter, so the refinement converges to the true minimum)."""
    dx = v2.x - v1.x
    dy = v2.y - v1.y
    t = np.linspace(0.0, 1.0, samples)
    d2 = (v1.x + t * dx - p.x) ** 2 + (v1.y + t * dy - p.y) ** 2
    i = int(np.argmin(d2))
    lo = t[max(0, i - 1)]
    hi = t[min(samples - 1, i + 1)]

    def at(tt: float) -> float:
        return (v1.x + tt * dx - p.x) ** 2 + (v1.y + tt * dy - p.y) ** 2

    for _ in range(200):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if at(m1) <= at(m2):
            hi = m2
        else:
            lo = m1
    return math.sqrt(at((lo + hi) / 2.0))
