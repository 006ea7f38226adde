"""Angular-interval algebra and collision-free steering ranges.

Given the chain built so far, the next link's steering angle is sampled
from the joint bounds minus, for every obstacle the link could touch, the
arc of headings that would drive the link into it. Removing those arcs is
exact for the link length at hand: every removed angle produces an
intersecting link, every kept angle a clear one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .geometry import CircleObstacle, Point2, rotation_to_x

_PI = math.pi


@dataclass(frozen=True)
class AngleIntervalSet:
    """Union of disjoint, sorted [lo, hi] angle intervals within (-pi, pi]."""

    intervals: tuple[tuple[float, float], ...] = field(default_factory=tuple)

    @classmethod
    def from_bounds(cls, lo: float, hi: float) -> "AngleIntervalSet":
        if hi < lo:
            raise ValueError("interval bounds out of order")
        return cls(((lo, hi),))

    def is_empty(self) -> bool:
        return not self.intervals

    def measure(self) -> float:
        return sum(hi - lo for lo, hi in self.intervals)

    def contains(self, a: float, slack: float = 0.0) -> bool:
        return any(lo - slack <= a <= hi + slack for lo, hi in self.intervals)


def interval_subtract(s: AngleIntervalSet, cut: tuple[float, float]) -> AngleIntervalSet:
    """Remove ``cut`` = [lo, hi] from every interval of ``s``.

    Intervals the cut bisects are split; ordering and disjointness are
    preserved. A cut with hi < lo is treated as empty.
    """
    clo, chi = cut
    if chi <= clo:
        return s
    out: list[tuple[float, float]] = []
    for lo, hi in s.intervals:
        if chi <= lo or clo >= hi:
            out.append((lo, hi))
            continue
        if clo > lo:
            out.append((lo, clo))
        if chi < hi:
            out.append((chi, hi))
    return AngleIntervalSet(tuple(out))


def _wrapped_cuts(lo: float, hi: float) -> Iterable[tuple[float, float]]:
    """Normalize an arc [lo, hi] (hi - lo < 2*pi) into cuts within (-pi, pi]."""
    lo = math.remainder(lo, 2.0 * _PI)
    hi = math.remainder(hi, 2.0 * _PI)
    if lo <= hi:
        yield (lo, hi)
    else:  # straddles +/-pi
        yield (lo, _PI)
        yield (-_PI, hi)


def allowed_angle_ranges(
    node: Point2,
    link_dir: Point2,
    link_len: float,
    obstacles: Sequence[CircleObstacle],
    dtheta: tuple[float, float],
) -> AngleIntervalSet:
    """Steering angles (relative to ``link_dir``) whose link stays clear.

    Starting from the full bounds ``dtheta``, each obstacle whose center lies
    within ``link_len + radius`` of the node cuts away the arc of headings
    for which a link of length ``link_len`` would cross it. In the frame
    rotated so the current heading is +x, the forbidden arc is centered on
    the direction to the obstacle center, with half-width

        asin(r/d)                     if the link reaches past the tangent
                                      points (link_len >= sqrt(d^2 - r^2)),
        acos((d^2 + L^2 - r^2)/(2dL)) otherwise (circle of reachable tips
                                      against the obstacle).

    Returns the empty set when the node is inside (or on) an obstacle; the
    caller falls back to the unrestricted bounds and lets the collision be
    penalized downstream.
    """
    rot = rotation_to_x(link_dir)
    cos_r = math.cos(rot)
    sin_r = math.sin(rot)
    allowed = AngleIntervalSet.from_bounds(dtheta[0], dtheta[1])
    for obs in obstacles:
        ox = obs.center.x - node.x
        oy = obs.center.y - node.y
        rx = cos_r * ox - sin_r * oy
        ry = sin_r * ox + cos_r * oy
        d = math.hypot(rx, ry)
        r = obs.radius
        if d > link_len + r:
            continue  # out of reach of the next link
        if d <= r:
            return AngleIntervalSet()
        tangent_depth = math.sqrt(d * d - r * r)
        if link_len >= tangent_depth:
            half = math.asin(min(1.0, r / d))
        else:
            cos_half = (d * d + link_len * link_len - r * r) / (2.0 * d * link_len)
            half = math.acos(max(-1.0, min(1.0, cos_half)))
        beta = math.atan2(ry, rx)
        for cut in _wrapped_cuts(beta - half, beta + half):
            allowed = interval_subtract(allowed, cut)
        if allowed.is_empty():
            break
    return allowed


def sample_uniform(s: AngleIntervalSet, rng) -> float:
    """Draw an angle uniformly over the union measure of ``s``.

    Each interval receives probability proportional to its width. A set of
    zero total measure (point intervals) returns one of its points.

    Raises:
        ValueError: if the set is empty.
    """
    if s.is_empty():
        raise ValueError("cannot sample from an empty angle set")
    total = s.measure()
    if total == 0.0:
        idx = int(rng.integers(len(s.intervals)))
        return s.intervals[idx][0]
    u = rng.uniform(0.0, total)
    for lo, hi in s.intervals:
        width = hi - lo
        if u <= width:
            return lo + u
        u -= width
    return s.intervals[-1][1]  # guard against fp summation slack
