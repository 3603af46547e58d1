"""Closed-form continuous-time geometry for disks translating along straight segments.

All collision semantics are open-disk: two disks conflict only when the distance
between centers is strictly below the sum of radii. Exact tangency (sliding contact)
is not a conflict. Comparisons on squared distances and quadratic discriminants use
the absolute tolerance EPS so that tangency classification is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INF = math.inf

# Absolute tolerance for squared-distance and discriminant comparisons, in squared
# cell units. Distances within sqrt-range of this of exact tangency count as tangent.
EPS = 1e-9


@dataclass(frozen=True)
class Point2:
    x: float
    y: float


@dataclass(frozen=True)
class TimeInterval:
    """Closed time interval [t_s, t_f]; t_f may be math.inf."""

    t_s: float
    t_f: float

    def __post_init__(self) -> None:
        if self.t_f < self.t_s:
            raise ValueError(f"interval end {self.t_f} precedes start {self.t_s}")

    def contains(self, t: float) -> bool:
        return self.t_s <= t <= self.t_f

    @property
    def duration(self) -> float:
        return self.t_f - self.t_s


@dataclass(frozen=True)
class MotionSegment:
    """Constant-velocity motion: position(t) = origin + velocity * (t - t_start).

    Waits and in-place rotations are segments with zero velocity. A robot parked
    forever uses t_end = math.inf.
    """

    origin: Point2
    vx: float
    vy: float
    t_start: float
    t_end: float

    def __post_init__(self) -> None:
        if self.t_end < self.t_start:
            raise ValueError(f"segment ends at {self.t_end} before start {self.t_start}")

    def position_at(self, t: float) -> Point2:
        dt = t - self.t_start
        return Point2(self.origin.x + self.vx * dt, self.origin.y + self.vy * dt)


def point_segment_distance(p: Point2, a: Point2, b: Point2) -> float:
    """Euclidean distance from point p to the closed segment [a, b].

    Degenerate segments (a == b) reduce to point-point distance.
    """
    dx = b.x - a.x
    dy = b.y - a.y
    d2 = dx * dx + dy * dy
    if d2 <= 0.0:
        return math.hypot(p.x - a.x, p.y - a.y)
    t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / d2
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return math.hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy))


def circle_entry_exit_times(seg: MotionSegment, center: Point2, radius: float) -> TimeInterval | None:
    """Time window during which the segment's moving point is strictly inside the disk.

    Solves |origin + v*(t - t_start) - center|^2 < radius^2 for t, clipped to the
    segment's own [t_start, t_end]. Returns None when the point never enters the open
    disk within the segment: tangency (discriminant <= EPS) and single-instant
    clipped windows both count as no entry.
    """
    wx = seg.origin.x - center.x
    wy = seg.origin.y - center.y
    a = seg.vx * seg.vx + seg.vy * seg.vy
    c = wx * wx + wy * wy - radius * radius
    if a <= EPS:
        # stationary point: inside for the whole segment or not at all
        if c < -EPS:
            return TimeInterval(seg.t_start, seg.t_end)
        return None
    b = wx * seg.vx + wy * seg.vy
    disc = b * b - a * c
    if disc <= EPS:
        return None
    root = math.sqrt(disc)
    lo = seg.t_start + (-b - root) / a
    hi = seg.t_start + (-b + root) / a
    if lo < seg.t_start:
        lo = seg.t_start
    if hi > seg.t_end:
        hi = seg.t_end
    if hi <= lo:
        return None
    return TimeInterval(lo, hi)


def translating_disks_collide(
    seg_a: MotionSegment,
    radius_a: float,
    seg_b: MotionSegment,
    radius_b: float,
) -> bool | None:
    """Whether two translating disks come strictly closer than radius_a + radius_b.

    Evaluated over the temporal overlap of the two segments. The squared separation
    is a convex quadratic in t, so the minimum is at the unconstrained vertex clamped
    to the overlap window.

    Returns:
        None when the segments share no instant in time (vacuously no collision),
        True when the disks collide during the overlap, False otherwise. Both
        None and False are falsy: a conflict exists only on True.
    """
    w_s = max(seg_a.t_start, seg_b.t_start)
    w_e = min(seg_a.t_end, seg_b.t_end)
    if w_e < w_s:
        return None
    px = (seg_a.origin.x + seg_a.vx * (w_s - seg_a.t_start)) - (
        seg_b.origin.x + seg_b.vx * (w_s - seg_b.t_start)
    )
    py = (seg_a.origin.y + seg_a.vy * (w_s - seg_a.t_start)) - (
        seg_b.origin.y + seg_b.vy * (w_s - seg_b.t_start)
    )
    dvx = seg_a.vx - seg_b.vx
    dvy = seg_a.vy - seg_b.vy
    dv2 = dvx * dvx + dvy * dvy
    if dv2 <= EPS:
        tau = 0.0
    else:
        tau = -(px * dvx + py * dvy) / dv2
        if tau < 0.0:
            tau = 0.0
        dur = w_e - w_s
        if tau > dur:
            tau = dur
    mx = px + dvx * tau
    my = py + dvy * tau
    r_sum = radius_a + radius_b
    return mx * mx + my * my < r_sum * r_sum - EPS


def angular_difference_deg(theta_from: float, theta_to: float) -> float:
    """Minimal absolute angular difference between two headings, in degrees [0, 180]."""
    d = math.fmod(theta_to - theta_from, 360.0)
    if d < 0.0:
        d += 360.0
    if d > 180.0:
        d = 360.0 - d
    return d


def normalize_heading_deg(theta: float) -> float:
    """Map an angle in degrees onto [0, 360)."""
    t = math.fmod(theta, 360.0)
    if t < 0.0:
        t += 360.0
    if t == 360.0:
        t = 0.0
    return t
