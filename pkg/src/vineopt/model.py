"""Problem instances and genotypes: tasks, bounds, solutions, designs.

A solution holds one steering-angle row per target plus a single length row
shared by all configurations; completion records (filled in by evaluation)
carry each configuration's live extent. The manufacturable design is the
shared length row truncated at the longest employed extent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .avoid import allowed_angle_ranges, sample_uniform
from .geometry import (
    CircleObstacle,
    Point2,
    Pose2,
    SegmentGeom,
    forward_kinematics,
)

_PI = math.pi


@dataclass(frozen=True)
class Bounds:
    """Joint/link bounds of the manipulator family being designed.

    n_max is the hard cap on link count; theta_range bounds every steering
    joint except possibly the first (first_joint_free: unconstrained first
    joint instead of one fixed to zero); length_range bounds every link.
    """

    n_max: int
    theta_range: tuple[float, float]
    length_range: tuple[float, float]
    first_joint_free: bool = False

    def joint_domain(self, joint: int) -> tuple[float, float]:
        """Sampling domain of 1-based ``joint``; the first is special."""
        if joint == 1 and not self.first_joint_free:
            return (0.0, 0.0)
        if joint == 1:
            return (-_PI, _PI)
        return self.theta_range


@dataclass(frozen=True)
class Task:
    """One optimization problem: reach every target pose from home."""

    home: Pose2
    targets: tuple[Pose2, ...]
    obstacles: tuple[CircleObstacle, ...] = ()
    bounds: Bounds = Bounds(8, (-_PI / 6.0, _PI / 6.0), (1.0, 5.0))
    orientation_segment_length: Optional[float] = None
    unit: str = ""

    def segment_length(self) -> float:
        """Orientation-segment length; defaults to the robot's max reach."""
        if self.orientation_segment_length is not None:
            return self.orientation_segment_length
        return self.bounds.n_max * self.bounds.length_range[1]


@dataclass
class CompletionRecord:
    """Per-configuration completion data filled in by evaluation.

    epsilon: 1-based index of the chain node closest to the orientation
    segment (the last employed node). theta_epsilon: steering correction
    aligning the next link with the segment. n_bar: index of the link
    carrying the end effector. last_len: that link's (possibly partial)
    length. shortfall: straight distance left uncovered when the genotype
    runs out of links, 0 when the target is reached.
    """

    epsilon: int
    theta_epsilon: float
    n_bar: int
    last_len: float
    shortfall: float


@dataclass
class Solution:
    """Full genotype: |t| angle rows, one shared length row, completions."""

    angles: list[list[float]]
    lengths: list[float]
    completions: Optional[list[CompletionRecord]] = None

    def copy(self) -> "Solution":
        return Solution([row[:] for row in self.angles], self.lengths[:], None)


def validate_task(task: Task) -> list[str]:
    """Check all task invariants; returns every violation found (no raising)."""
    errors: list[str] = []
    b = task.bounds
    if b.n_max < 1:
        errors.append("bounds.n_max must be at least 1")
    tlo, thi = b.theta_range
    if tlo == thi:
        errors.append("empty steering range (theta bounds are equal)")
    elif tlo > thi:
        errors.append("steering range bounds out of order")
    if tlo <= -_PI or thi >= _PI:
        errors.append("steering range must lie strictly inside (-pi, pi)")
    llo, lhi = b.length_range
    if llo <= 0.0:
        errors.append("link length lower bound must be positive")
    if not llo < lhi:
        errors.append("empty or inverted link length range")
    if not task.targets:
        errors.append("at least one target required")
    seg_len = task.orientation_segment_length
    if seg_len is not None and seg_len <= 0.0:
        errors.append("orientation segment length must be positive")
    for k, obs in enumerate(task.obstacles):
        if obs.radius <= 0.0:
            errors.append(f"obstacle {k}: radius must be positive")
    for k, pose in enumerate(task.targets):
        if not (-_PI < pose.orientation <= _PI):
            errors.append(f"target {k}: orientation not wrapped to (-pi, pi]")
        if not all(math.isfinite(v) for v in (pose.position.x, pose.position.y)):
            errors.append(f"target {k}: non-finite position")
        for j, obs in enumerate(task.obstacles):
            if obs.radius <= 0.0:
                continue
            d = math.hypot(
                pose.position.x - obs.center.x, pose.position.y - obs.center.y
            )
            if d <= obs.radius:
                errors.append(f"target {k} inside obstacle {j}")
    for j, obs in enumerate(task.obstacles):
        if obs.radius <= 0.0:
            continue
        d = math.hypot(
            task.home.position.x - obs.center.x, task.home.position.y - obs.center.y
        )
        if d <= obs.radius:
            errors.append(f"home inside obstacle {j}")
    if not (-_PI < task.home.orientation <= _PI):
        errors.append("home orientation not wrapped to (-pi, pi]")
    return errors


def orientation_segment(target: Pose2, length: float) -> SegmentGeom:
    """Approach segment ending at the target along its orientation.

    v2 is the target position; v1 sits ``length`` behind it against the
    orientation, so the robot approaches along v1 -> v2.
    """
    if length <= 0.0:
        raise ValueError("orientation segment length must be positive")
    c = math.cos(target.orientation)
    s = math.sin(target.orientation)
    v2 = target.position
    v1 = Point2(v2.x - length * c, v2.y - length * s)
    return SegmentGeom(v1, v2)


def generate_angle_row(
    task: Task, lengths: Sequence[float], rng, avoidance: bool
) -> list[float]:
    """Draw one configuration's angle row sequentially, node by node.

    With avoidance on, each joint samples from the collision-free portion of
    its domain given the chain built so far and the genotype length of the
    link being generated; an empty allowed set falls back to the full domain
    (the collision is penalized later).
    """
    b = task.bounds
    row: list[float] = []
    x, y = task.home.position
    heading = task.home.orientation
    for j in range(1, b.n_max + 1):
        lo, hi = b.joint_domain(j)
        if lo == hi:
            theta = lo
        elif avoidance and task.obstacles:
            allowed = allowed_angle_ranges(
                Point2(x, y),
                Point2(math.cos(heading), math.sin(heading)),
                lengths[j - 1],
                task.obstacles,
                (lo, hi),
            )
            if allowed.is_empty():
                theta = float(rng.uniform(lo, hi))
            else:
                theta = sample_uniform(allowed, rng)
        else:
            theta = float(rng.uniform(lo, hi))
        row.append(theta)
        heading += theta
        x += lengths[j - 1] * math.cos(heading)
        y += lengths[j - 1] * math.sin(heading)
    return row


def random_solution(task: Task, rng, avoidance: bool) -> Solution:
    """Uniformly random genotype within bounds (avoidance-aware when asked)."""
    llo, lhi = task.bounds.length_range
    lengths = [float(rng.uniform(llo, lhi)) for _ in range(task.bounds.n_max)]
    angles = [
        generate_angle_row(task, lengths, rng, avoidance) for _ in task.targets
    ]
    return Solution(angles, lengths)


def design_of(solution: Solution) -> list[float]:
    """Manufacturable link-length vector of an evaluated solution.

    The shared length row truncated at n* = max n_bar; a link that is
    interior for any configuration keeps its full genotype length, and the
    final entry comes from the configuration with the largest n_bar
    (ties: lowest target index).
    """
    if not solution.completions:
        raise ValueError("solution not evaluated: completions are missing")
    n_star = max(c.n_bar for c in solution.completions)
    winner = next(c for c in solution.completions if c.n_bar == n_star)
    design = [float(v) for v in solution.lengths[: n_star - 1]]
    design.append(winner.last_len)
    return design


def chain_of(task: Task, angles_row: Sequence[float], lengths: Sequence[float]):
    """Forward kinematics of one genotype configuration from home."""
    return forward_kinematics(angles_row, lengths, task.home)
