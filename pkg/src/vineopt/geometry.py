"""Planar geometric primitives shared by the fitness, constraint and
obstacle-avoidance code.

Everything here is a pure function of its arguments and uses plain floats
(at chain sizes of a couple dozen nodes, scalar math is faster than array
round-trips and keeps results bit-reproducible). All geometric tolerances
are absolute and fixed at 1e-9; workspace units are dimensionless.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

TOL = 1e-9


class Point2(NamedTuple):
    """A point in the plane."""

    x: float
    y: float


class Pose2(NamedTuple):
    """A position plus an orientation in radians, wrapped to (-pi, pi]."""

    position: Point2
    orientation: float


class SegmentGeom(NamedTuple):
    """A closed segment between two distinct endpoints."""

    v1: Point2
    v2: Point2


class CircleObstacle(NamedTuple):
    """A circular obstacle with strictly positive radius."""

    center: Point2
    radius: float


def make_pose(x: float, y: float, orientation: float) -> Pose2:
    """Build a pose with the orientation normalized into (-pi, pi]."""
    return Pose2(Point2(float(x), float(y)), wrap_angle(orientation))


def wrap_angle(a: float) -> float:
    """Wrap an angle in radians into the interval (-pi, pi].

    Args:
        a: any finite angle.

    Returns:
        The equivalent angle in (-pi, pi].
    """
    w = math.fmod(a, 2.0 * math.pi)
    if w <= -math.pi:
        w += 2.0 * math.pi
    elif w > math.pi:
        w -= 2.0 * math.pi
    return w


def rotation_to_x(u: Point2) -> float:
    """Angle of the rotation that maps the unit vector ``u`` onto (1, 0).

    The returned value is the rotation angle; apply it with
    :func:`rotate_point`. The rotation is proper (determinant +1).

    Args:
        u: a unit vector (norm within 1e-9 of 1).

    Returns:
        The rotation angle in radians; rotating ``u`` by it yields (1, 0)
        within 1e-9.

    Raises:
        ValueError: if ``u`` has (near) zero length.
    """
    n = math.hypot(u.x, u.y)
    if n < TOL:
        raise ValueError("cannot build a rotation from a zero-length vector")
    return -math.atan2(u.y, u.x)


def rotate_point(p: Point2, angle: float) -> Point2:
    """Rotate ``p`` about the origin by ``angle`` radians."""
    c = math.cos(angle)
    s = math.sin(angle)
    return Point2(c * p.x - s * p.y, s * p.x + c * p.y)


def point_segment_distance(p: Point2, v1: Point2, v2: Point2) -> float:
    """Euclidean distance from a point to the closed segment ``v1``-``v2``.

    The segment is centered at its midpoint and rotated onto the horizontal
    axis (the same proper rotation used by the obstacle-avoidance code);
    the distance is then one of three cases: to the first endpoint, the
    perpendicular drop onto the segment, or to the second endpoint.

    Args:
        p: the query point.
        v1: first endpoint.
        v2: second endpoint (must differ from ``v1``).

    Returns:
        The distance, >= 0.

    Raises:
        ValueError: if the segment is degenerate (``v1`` == ``v2``),
            which signals an invalid orientation segment upstream.
    """
    dx = v2.x - v1.x
    dy = v2.y - v1.y
    length = math.hypot(dx, dy)
    if length == 0.0:
        raise ValueError("degenerate segment: endpoints coincide")
    cx = (v1.x + v2.x) * 0.5
    cy = (v1.y + v2.y) * 0.5
    ang = rotation_to_x(Point2(dx / length, dy / length))
    c = math.cos(ang)
    s = math.sin(ang)
    px = p.x - cx
    py = p.y - cy
    rx = c * px - s * py
    ry = s * px + c * py
    half = length * 0.5
    if rx < -half:
        return math.hypot(rx + half, ry)
    if rx <= half:
        return abs(ry)
    return math.hypot(rx - half, ry)


def circle_circle_intersection(
    c1: Point2, r1: float, c2: Point2, r2: float
) -> tuple[Point2, ...]:
    """Intersection points of two circles.

    Args:
        c1, r1: center and radius (> 0) of the first circle.
        c2, r2: center and radius (> 0) of the second circle.

    Returns:
        A tuple of 0, 1 (tangency) or 2 points, each satisfying both circle
        equations within 1e-9. Empty when the circles are disjoint or
        nested.

    Raises:
        ValueError: if the circles coincide (infinite intersection).
    """
    dx = c2.x - c1.x
    dy = c2.y - c1.y
    d = math.hypot(dx, dy)
    if d < TOL and abs(r1 - r2) < TOL:
        raise ValueError("coincident circles have infinitely many intersections")
    if d > r1 + r2 + TOL or d < abs(r1 - r2) - TOL:
        return ()
    # Distance from c1 to the chord's foot along the center line.
    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h_sq = r1 * r1 - a * a
    mx = c1.x + a * dx / d
    my = c1.y + a * dy / d
    if h_sq <= TOL:
        return (Point2(mx, my),)
    h = math.sqrt(h_sq)
    ox = -dy / d * h
    oy = dx / d * h
    return (Point2(mx + ox, my + oy), Point2(mx - ox, my - oy))


def segment_circle_intersects(seg: SegmentGeom, obs: CircleObstacle) -> int:
    """Number of boundary crossings between a closed segment and a circle.

    A segment lying entirely inside the circle has no boundary crossings but
    is still a collision; it is reported as 2 so that collision counters
    penalize it. Tangential grazing counts as 1.

    Raises:
        ValueError: on a degenerate segment.
    """
    v1, v2 = seg
    dx = v2.x - v1.x
    dy = v2.y - v1.y
    a = dx * dx + dy * dy
    if a == 0.0:
        raise ValueError("degenerate segment: endpoints coincide")
    fx = v1.x - obs.center.x
    fy = v1.y - obs.center.y
    b = 2.0 * (fx * dx + fy * dy)
    cc = fx * fx + fy * fy - obs.radius * obs.radius
    disc = b * b - 4.0 * a * cc
    if disc < 0.0:
        # No crossing of the supporting line: inside entirely, or clear.
        return 2 if cc < 0.0 else 0
    sq = math.sqrt(disc)
    t1 = (-b - sq) / (2.0 * a)
    t2 = (-b + sq) / (2.0 * a)
    crossings = 0
    if -TOL <= t1 <= 1.0 + TOL:
        crossings += 1
    if sq > TOL and -TOL <= t2 <= 1.0 + TOL:
        crossings += 1
    if crossings == 0 and cc < 0.0:
        # Both roots outside [0,1] with an endpoint inside: fully contained.
        return 2
    return crossings


def forward_kinematics(
    angles: Sequence[float], lengths: Sequence[float], home: Pose2
) -> list[Point2]:
    """Cartesian node chain of one configuration.

    Node 0 is the home position; node j extends node j-1 by lengths[j]
    along the cumulative heading home.orientation + sum(angles[:j]).

    Args:
        angles: per-joint steering angles, radians.
        lengths: per-link lengths (same count), >= 0.
        home: base pose.

    Returns:
        All k+1 nodes (joints plus tip).
    """
    nodes = [home.position]
    x, y = home.position
    heading = home.orientation
    for theta, ln in zip(angles, lengths):
        heading += theta
        x += ln * math.cos(heading)
        y += ln * math.sin(heading)
        nodes.append(Point2(x, y))
    return nodes
