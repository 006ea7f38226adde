"""Configuration completion, the five objectives, constraints and penalty.

Completion turns a genotype configuration into a realized chain: find the
node closest to the target's approach segment, steer the next link parallel
to the segment, and consume genotype links straight along it until the
target's projection is covered. The kinematic objective, the component
objectives and the constraint set all read off that completion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .geometry import (
    Point2,
    Pose2,
    SegmentGeom,
    forward_kinematics,
    point_segment_distance,
    segment_circle_intersects,
    wrap_angle,
)
from .model import CompletionRecord, Solution, Task, orientation_segment

DEFAULT_PENALTY: tuple[float, float, float, float, float] = (
    10.0,
    10.0,
    10.0,
    10.0,
    100.0,
)
ORIENTATION_TOLERANCE = math.pi / 18.0


@dataclass(frozen=True)
class ObjectiveVector:
    """The five prioritized objectives of one evaluated solution.

    f12: kinematic closeness (node-to-segment distances plus any uncovered
    straight growth), f31a: links spent reaching the segments, f33:
    undulation percentage in [0, 100], f31b: links lying on the segments,
    f32: length of the longest configuration.
    """

    f12: float
    f31a: int
    f33: float
    f31b: int
    f32: float


@dataclass(frozen=True)
class ViolationVector:
    """Constraint violations: [correction below bound, correction above
    bound, short final link, orientation mismatch, collision count]."""

    v: tuple[float, float, float, float, float]

    def is_feasible(self) -> bool:
        return all(value == 0.0 for value in self.v)


@dataclass
class EvaluationResult:
    solution: Solution
    objectives: ObjectiveVector
    violations: ViolationVector
    penalized_f12: float


def _segment_distances(
    chain: Sequence[Point2], segment: SegmentGeom
) -> tuple[int, float]:
    """(1-based index of the closest non-home node, its distance)."""
    best_idx = 1
    best = point_segment_distance(chain[1], segment.v1, segment.v2)
    for j in range(2, len(chain)):
        d = point_segment_distance(chain[j], segment.v1, segment.v2)
        if d < best:
            best = d
            best_idx = j
    return best_idx, best


def complete_configuration(
    angles_row: Sequence[float],
    lengths: Sequence[float],
    target: Pose2,
    task: Task,
    maximize_straight: bool = False,
) -> CompletionRecord:
    """Completion record of one configuration against one target.

    Steps: forward kinematics; epsilon = closest non-home node to the
    orientation segment (ties to the smallest index); theta_epsilon = wrapped
    gap between the segment direction and the chain heading at epsilon; the
    remaining links grow parallel to the segment until the projection of the
    target onto that direction is covered. Overshoot (projection <= 0) ends
    the chain at epsilon with a zero-length last link; running out of links
    leaves a positive shortfall.

    With ``maximize_straight`` the straight section consumes the upper length
    bound per link instead of the genotype values (the genotype itself is
    not modified).
    """
    segment = orientation_segment(target, task.segment_length())
    chain = forward_kinematics(angles_row, lengths, task.home)
    eps, _ = _segment_distances(chain, segment)
    n = len(angles_row)
    heading_eps = task.home.orientation + math.fsum(angles_row[:eps])
    seg_dir = target.orientation
    theta_eps = wrap_angle(seg_dir - heading_eps)
    node = chain[eps]
    d = (target.position.x - node.x) * math.cos(seg_dir) + (
        target.position.y - node.y
    ) * math.sin(seg_dir)
    if d <= 0.0:
        return CompletionRecord(eps, theta_eps, eps, 0.0, 0.0)
    hi = task.bounds.length_range[1]
    covered = 0.0
    for j in range(eps + 1, n + 1):
        step = hi if maximize_straight else lengths[j - 1]
        if covered + step >= d:
            return CompletionRecord(eps, theta_eps, j, d - covered, 0.0)
        covered += step
    last = hi if maximize_straight else lengths[n - 1]
    return CompletionRecord(eps, theta_eps, n, last, d - covered)


def completed_chain(
    task: Task,
    angles_row: Sequence[float],
    lengths: Sequence[float],
    completion: CompletionRecord,
    target: Pose2,
    maximize_straight: bool = False,
) -> list[Point2]:
    """Node sequence of the realized chain: genotype links through epsilon,
    then the straight section to n_bar with its partial last link."""
    chain = forward_kinematics(
        angles_row[: completion.epsilon], lengths[: completion.epsilon], task.home
    )
    if completion.n_bar == completion.epsilon:
        return chain
    seg_dir = target.orientation
    cos_d = math.cos(seg_dir)
    sin_d = math.sin(seg_dir)
    hi = task.bounds.length_range[1]
    x, y = chain[-1]
    for j in range(completion.epsilon + 1, completion.n_bar + 1):
        if j == completion.n_bar:
            step = completion.last_len
        elif maximize_straight:
            step = hi
        else:
            step = lengths[j - 1]
        x += step * cos_d
        y += step * sin_d
        chain.append(Point2(x, y))
    return chain


def kinematic_fitness(solution: Solution, task: Task) -> float:
    """Sum over targets of the closest node-to-segment distance, plus each
    configuration's uncovered straight growth (shortfall)."""
    if solution.completions is None:
        raise ValueError("solution not evaluated: completions are missing")
    total = 0.0
    for row, target, completion in zip(
        solution.angles, task.targets, solution.completions
    ):
        segment = orientation_segment(target, task.segment_length())
        chain = forward_kinematics(row, solution.lengths, task.home)
        _, dist = _segment_distances(chain, segment)
        total += dist + completion.shortfall
    return total


def _sign(x: float) -> int:
    if x > 0.0:
        return 1
    if x < 0.0:
        return -1
    return 0


def component_objectives(
    solution: Solution, task: Task, maximize_straight: bool = False
) -> ObjectiveVector:
    """f31a, f33, f31b and f32 of an evaluated solution (f12 left at 0)."""
    if solution.completions is None:
        raise ValueError("solution not evaluated: completions are missing")
    f31a = 0
    f31b = 0
    f32 = 0.0
    undulation = 0.0
    hi = task.bounds.length_range[1]
    for row, completion in zip(solution.angles, solution.completions):
        eps = completion.epsilon
        n_bar = completion.n_bar
        f31a += eps - 1
        f31b += n_bar - (eps - 1)
        length = completion.last_len
        for j in range(1, n_bar):
            if j <= eps or not maximize_straight:
                length += solution.lengths[j - 1]
            else:
                length += hi
        f32 = max(f32, length)
        changes = 0
        for jj in range(eps - 1):
            cur = row[jj]
            succ = row[jj + 1] if jj < eps - 2 else completion.theta_epsilon
            if cur != 0.0 and _sign(cur) != _sign(succ):
                changes += 1
        undulation += changes / eps
    f33 = 100.0 * undulation / len(task.targets)
    return ObjectiveVector(0.0, f31a, f33, f31b, f32)


def constraint_violations(
    solution: Solution, task: Task, maximize_straight: bool = False
) -> ViolationVector:
    """Violation magnitudes of the four kinematic constraints plus the
    obstacle-collision count of the completed chains."""
    if solution.completions is None:
        raise ValueError("solution not evaluated: completions are missing")
    tlo, thi = task.bounds.theta_range
    llo = task.bounds.length_range[0]
    v1 = v2 = v3 = v4 = 0.0
    collisions = 0
    for row, target, completion in zip(
        solution.angles, task.targets, solution.completions
    ):
        te = completion.theta_epsilon
        v1 += max(0.0, tlo - te)
        v2 += max(0.0, te - thi)
        if completion.n_bar == completion.epsilon:
            v3 += max(0.0, llo - completion.last_len)
        heading = (
            task.home.orientation
            + math.fsum(row[: completion.epsilon - 1])
            + te
            - target.orientation
        )
        mismatch = abs(wrap_angle(heading))
        if mismatch >= ORIENTATION_TOLERANCE:
            v4 += mismatch
        chain = completed_chain(
            task, row, solution.lengths, completion, target, maximize_straight
        )
        for a, b in zip(chain, chain[1:]):
            if a.x == b.x and a.y == b.y:
                continue
            for obs in task.obstacles:
                collisions += segment_circle_intersects(SegmentGeom(a, b), obs)
    return ViolationVector((v1, v2, v3, v4, float(collisions)))


def penalized_fitness(
    f12: float, violations: ViolationVector, penalty: Sequence[float] = DEFAULT_PENALTY
) -> float:
    """Static penalty: f12 plus the weighted violations. The component
    objectives are never penalized."""
    return f12 + sum(r * v for r, v in zip(penalty, violations.v))


def evaluate(
    solution: Solution,
    task: Task,
    penalty: Sequence[float] = DEFAULT_PENALTY,
    maximize_straight: bool = False,
) -> EvaluationResult:
    """Complete every configuration, then compute objectives, constraints
    and the penalized kinematic fitness. Pure apart from filling the
    solution's completion records; evaluating twice gives identical output."""
    solution.completions = [
        complete_configuration(row, solution.lengths, target, task, maximize_straight)
        for row, target in zip(solution.angles, task.targets)
    ]
    f12 = kinematic_fitness(solution, task)
    objectives = replace(
        component_objectives(solution, task, maximize_straight), f12=f12
    )
    violations = constraint_violations(solution, task, maximize_straight)
    penalized = penalized_fitness(f12, violations, penalty)
    n_bar_total = sum(c.n_bar for c in solution.completions)
    if objectives.f31a + objectives.f31b != n_bar_total:
        raise AssertionError("link-count objectives lost their telescoping identity")
    if not 0.0 <= objectives.f33 <= 100.0:
        raise AssertionError("undulation percentage escaped [0, 100]")
    return EvaluationResult(solution, objectives, violations, penalized)
