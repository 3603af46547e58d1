"""Independent reference implementations used only by the test suite.

Everything here recomputes results by brute force (dense time sampling, per-cell
exact predicates, shapely constructions, time-expanded search) so that the package's
closed-form routines are checked against a second route, not against themselves.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from fleetplan.geometry import MotionSegment, Point2


def segment_positions(seg: MotionSegment, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    dt = ts - seg.t_start
    return seg.origin.x + seg.vx * dt, seg.origin.y + seg.vy * dt


def sampled_min_separation(
    seg_a: MotionSegment,
    seg_b: MotionSegment,
    dt: float,
) -> tuple[float, float] | None:
    """Minimum center distance over the temporal overlap, by dense sampling.

    Returns (min_distance, t_at_min), or None when the segments do not overlap in
    time. Infinite segment ends are truncated far past the last finite endpoint,
    by which time relative motion is monotone diverging or constant.
    """
    w_s = max(seg_a.t_start, seg_b.t_start)
    w_e = min(seg_a.t_end, seg_b.t_end)
    if w_e < w_s:
        return None
    if math.isinf(w_e):
        finite = [t for t in (seg_a.t_start, seg_a.t_end, seg_b.t_start, seg_b.t_end) if math.isfinite(t)]
        w_e = max(finite) + 100.0
        if w_e <= w_s:
            w_e = w_s + 100.0
    n = max(2, int(round((w_e - w_s) / dt)) + 1)
    ts = np.linspace(w_s, w_e, n)
    ax, ay = segment_positions(seg_a, ts)
    bx, by = segment_positions(seg_b, ts)
    d = np.hypot(ax - bx, ay - by)
    k = int(np.argmin(d))
    return float(d[k]), float(ts[k])


def sampled_inside_window(
    seg: MotionSegment,
    center: Point2,
    radius: float,
    dt: float,
) -> tuple[float, float] | None:
    """First and last sampled instants at which the segment point is inside the disk."""
    t_end = seg.t_end
    if math.isinf(t_end):
        t_end = seg.t_start + 1000.0
    n = max(2, int(round((t_end - seg.t_start) / dt)) + 1)
    ts = np.linspace(seg.t_start, t_end, n)
    x, y = segment_positions(seg, ts)
    inside = (x - center.x) ** 2 + (y - center.y) ** 2 < radius * radius
    idx = np.flatnonzero(inside)
    if idx.size == 0:
        return None
    return float(ts[idx[0]]), float(ts[idx[-1]])


def swept_cells_shapely(a: Point2, b: Point2, radius: float, pad: int = 3) -> set[tuple[int, int]]:
    """Cells whose closed unit square comes strictly within radius of segment [a, b].

    Uses shapely's exact polygon distance as the independent route.
    """
    from shapely.geometry import LineString, Point, box

    if math.hypot(b.x - a.x, b.y - a.y) < 1e-9:
        # GEOS underflows to NaN on near-degenerate lines; a point is within 1e-9
        path = Point(a.x, a.y)
    else:
        path = LineString([(a.x, a.y), (b.x, b.y)])
    i_lo = math.floor(min(a.x, b.x) - radius) - pad
    i_hi = math.floor(max(a.x, b.x) + radius) + pad
    j_lo = math.floor(min(a.y, b.y) - radius) - pad
    j_hi = math.floor(max(a.y, b.y) + radius) + pad
    out = set()
    for i in range(i_lo, i_hi + 1):
        for j in range(j_lo, j_hi + 1):
            if box(i, j, i + 1, j + 1).distance(path) < radius:
                out.add((i, j))
    return out


def min_pairwise_separation_sampled(
    segs_a: list[MotionSegment],
    segs_b: list[MotionSegment],
    dt: float,
    horizon: float,
) -> float:
    """Minimum distance between two piecewise-linear motions over [0, horizon]."""
    ts = np.arange(0.0, horizon + dt, dt)
    ax, ay = piecewise_positions(segs_a, ts)
    bx, by = piecewise_positions(segs_b, ts)
    return float(np.min(np.hypot(ax - bx, ay - by)))


def occupancy_runs_sampled(
    entries: list[tuple[MotionSegment, float]],
    center: Point2,
    r_cur: float,
    dt: float,
    horizon: float,
) -> list[tuple[float, float]]:
    """Sampled time windows during which a disk at `center` would collide with any entry.

    Strict inequality against r_cur + r_entry, matching open-disk semantics. Returns
    maximal runs of occupied samples as (first_t, last_t) pairs, clipped to horizon.
    """
    ts = np.arange(0.0, horizon, dt)
    occ = np.zeros(ts.shape, dtype=bool)
    for seg, radius in entries:
        active = ts >= seg.t_start
        if math.isfinite(seg.t_end):
            active &= ts <= seg.t_end
        x = seg.origin.x + seg.vx * (ts - seg.t_start)
        y = seg.origin.y + seg.vy * (ts - seg.t_start)
        r_sum = r_cur + radius
        occ |= active & ((x - center.x) ** 2 + (y - center.y) ** 2 < r_sum * r_sum)
    idx = np.flatnonzero(occ)
    if idx.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate(([idx[0]], idx[breaks + 1]))
    ends = np.concatenate((idx[breaks], [idx[-1]]))
    return [(float(ts[s]), float(ts[e])) for s, e in zip(starts, ends)]


def first_safe_departure_sweep(
    src: Point2,
    dst: Point2,
    speed: float,
    robot_radius: float,
    entries: list[tuple[MotionSegment, float]],
    dep_lo: float,
    dep_hi: float,
    dep_step: float,
    sample_dt: float = 1e-4,
) -> float | None:
    """First departure in [dep_lo, dep_hi] whose move stays sampled-clear of all entries."""
    dist = math.hypot(dst.x - src.x, dst.y - src.y)
    dur = dist / speed
    deps = np.arange(dep_lo, dep_hi + dep_step / 2, dep_step)
    n = max(2, int(round(dur / sample_dt)) + 1)
    rel = np.linspace(0.0, dur, n)
    rx = src.x + (dst.x - src.x) * (rel / dur)
    ry = src.y + (dst.y - src.y) * (rel / dur)
    for dep in deps:
        t = dep + rel
        clear = True
        for seg, radius in entries:
            active = t >= seg.t_start
            if math.isfinite(seg.t_end):
                active &= t <= seg.t_end
            ox = seg.origin.x + seg.vx * (t - seg.t_start)
            oy = seg.origin.y + seg.vy * (t - seg.t_start)
            r_sum = robot_radius + radius
            if np.any(active & ((rx - ox) ** 2 + (ry - oy) ** 2 < r_sum * r_sum)):
                clear = False
                break
        if clear:
            return float(dep)
    return None


def refined_min_separation(
    seg_a: MotionSegment,
    seg_b: MotionSegment,
    coarse_dt: float = 1e-3,
    fine_dt: float = 1e-5,
) -> float | None:
    """Minimum center distance over the temporal overlap, resolved to fine_dt.

    The squared separation is a convex quadratic on the overlap window, so the
    true minimum lies within one coarse step of the sampled argmin; a fine pass
    over that bracket resolves it. Returns None when the segments share no time.
    """
    w_s = max(seg_a.t_start, seg_b.t_start)
    w_e = min(seg_a.t_end, seg_b.t_end)
    if w_e < w_s:
        return None
    if math.isinf(w_e):
        finite = [t for t in (seg_a.t_start, seg_a.t_end, seg_b.t_start, seg_b.t_end) if math.isfinite(t)]
        w_e = (max(finite) if finite else w_s) + 100.0
        if w_e <= w_s:
            w_e = w_s + 100.0
    n = max(2, int(math.ceil((w_e - w_s) / coarse_dt)) + 1)
    ts = np.linspace(w_s, w_e, n)
    ax, ay = segment_positions(seg_a, ts)
    bx, by = segment_positions(seg_b, ts)
    d2 = (ax - bx) ** 2 + (ay - by) ** 2
    k = int(np.argmin(d2))
    lo = ts[max(0, k - 1)]
    hi = ts[min(n - 1, k + 1)]
    m = max(2, int(math.ceil((hi - lo) / fine_dt)) + 1)
    fs = np.linspace(lo, hi, m)
    ax, ay = segment_positions(seg_a, fs)
    bx, by = segment_positions(seg_b, fs)
    fine = float(np.min(np.hypot(ax - bx, ay - by)))
    return min(fine, float(math.sqrt(d2[k])))


def refined_inside_window(
    seg: MotionSegment,
    center: Point2,
    radius: float,
    coarse_dt: float = 1e-3,
    fine_dt: float = 1e-6,
) -> tuple[float, float] | None:
    """Entry/exit instants of the segment point into the open disk, refined boundaries.

    A coarse scan finds the inside run (inside-ness flips at most twice because the
    squared distance is quadratic in time); each boundary is then refined by a fine
    scan over the bracketing coarse step. Returns None when no sample lands inside.
    """
    t_end = seg.t_end
    if math.isinf(t_end):
        t_end = seg.t_start + 1000.0
    n = max(2, int(math.ceil((t_end - seg.t_start) / coarse_dt)) + 1)
    ts = np.linspace(seg.t_start, t_end, n)
    x, y = segment_positions(seg, ts)
    r2 = radius * radius
    inside = (x - center.x) ** 2 + (y - center.y) ** 2 < r2
    idx = np.flatnonzero(inside)
    if idx.size == 0:
        return None

    def refine(lo_t: float, hi_t: float, want_first: bool) -> float:
        m = max(2, int(math.ceil((hi_t - lo_t) / fine_dt)) + 1)
        fs = np.linspace(lo_t, hi_t, m)
        fx, fy = segment_positions(seg, fs)
        fin = np.flatnonzero((fx - center.x) ** 2 + (fy - center.y) ** 2 < r2)
        if fin.size == 0:
            return lo_t if want_first else hi_t
        return float(fs[fin[0]] if want_first else fs[fin[-1]])

    first = refine(ts[max(0, idx[0] - 1)], ts[idx[0]], True)
    last = refine(ts[idx[-1]], ts[min(n - 1, idx[-1] + 1)], False)
    return first, last


ObstaclePiece = tuple[float, float, float, float, float, float]  # x0, y0, x1, y1, t0, t1


def _obstacle_tracks(
    obstacle_paths: list[list[ObstaclePiece]],
    ts: np.ndarray,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Sampled obstacle positions; positions hold at the path ends (parked forever)."""
    tracks = []
    for pieces in obstacle_paths:
        kt, kx, ky = [], [], []
        for x0, y0, x1, y1, t0, t1 in pieces:
            if not kt or t0 > kt[-1]:
                kt.append(t0)
                kx.append(x0)
                ky.append(y0)
            kt.append(t1)
            kx.append(x1)
            ky.append(y1)
        tracks.append((np.interp(ts, kt, kx), np.interp(ts, kt, ky)))
    return tracks


def time_expanded_astar(
    width: int,
    height: int,
    start: tuple[int, int],
    goal: tuple[int, int],
    obstacle_paths: list[list[ObstaclePiece]],
    r_sum: float,
    delta: float = 0.1,
    sub: int = 5,
    max_steps: int = 1200,
) -> float | None:
    """Earliest goal arrival for a unit-speed 4-connected robot, by time-expanded A*.

    States are (cell, step) on a delta lattice; actions are a one-step wait or a
    cardinal unit move lasting round(1/delta) steps. Collision is dense sampling
    every delta/sub seconds against piecewise-linear obstacle paths that park
    forever at their final point, using the strict test d^2 < r_sum^2 - 1e-9.
    The goal is accepted only from steps where sitting there stays clear through
    the end of all obstacle motion. Returns the arrival time in seconds, or None
    when no plan exists within max_steps.
    """
    move_steps = int(round(1.0 / delta))
    n_samples = (max_steps + move_steps + 2) * sub + 1
    ts = np.arange(n_samples) * (delta / sub)
    tracks = _obstacle_tracks(obstacle_paths, ts)
    thresh = r_sum * r_sum - 1e-9

    # per-cell conflict table, prefix sums for O(1) wait checks, suffix for goal sitting
    conflict = {}
    for i in range(width):
        cx = i + 0.5
        for j in range(height):
            cy = j + 0.5
            occ = np.zeros(n_samples, dtype=bool)
            for ox, oy in tracks:
                occ |= (cx - ox) ** 2 + (cy - oy) ** 2 < thresh
            conflict[(i, j)] = np.concatenate(([0], np.cumsum(occ, dtype=np.int64)))

    def window_clear(cell: tuple[int, int], s_lo: int, s_hi: int) -> bool:
        cum = conflict[cell]
        return cum[s_hi + 1] - cum[s_lo] == 0

    goal_cum = conflict[goal]
    total_conflicts = goal_cum[-1]
    sit_safe_from = None
    if total_conflicts == 0:
        sit_safe_from = 0
    else:
        # earliest sample index from which the goal cell stays clear to the horizon
        still = np.flatnonzero(np.diff(goal_cum) > 0)
        sit_safe_from = int(still[-1]) + 1

    phases = np.arange(move_steps * sub + 1) / (move_steps * sub)

    def move_clear(i: int, j: int, di: int, dj: int, n: int) -> bool:
        s0 = n * sub
        s1 = s0 + move_steps * sub
        if s1 >= n_samples:
            return False
        rx = (i + 0.5) + di * phases
        ry = (j + 0.5) + dj * phases
        for ox, oy in tracks:
            if np.any((rx - ox[s0:s1 + 1]) ** 2 + (ry - oy[s0:s1 + 1]) ** 2 < thresh):
                return False
        return True

    def h(i: int, j: int) -> int:
        return (abs(i - goal[0]) + abs(j - goal[1])) * move_steps

    start_state = (start[0], start[1], 0)
    if not window_clear(start, 0, 0):
        return None
    open_heap = [(h(*start), 0, start[0], start[1])]
    seen = {start_state}
    g_of = {start_state: 0}
    while open_heap:
        f, n, i, j = heapq.heappop(open_heap)
        if (i, j) == goal and n * sub >= sit_safe_from:
            return n * delta
        if n >= max_steps:
            continue
        # wait one step
        if window_clear((i, j), n * sub, (n + 1) * sub):
            state = (i, j, n + 1)
            if state not in seen:
                seen.add(state)
                heapq.heappush(open_heap, (n + 1 + h(i, j), n + 1, i, j))
        # cardinal moves
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            ni, nj = i + di, j + dj
            if not (0 <= ni < width and 0 <= nj < height):
                continue
            state = (ni, nj, n + move_steps)
            if state in seen:
                continue
            if move_clear(i, j, di, dj, n):
                seen.add(state)
                heapq.heappush(
                    open_heap, (n + move_steps + h(ni, nj), n + move_steps, ni, nj)
                )
    return None


def piecewise_positions(segs: list[MotionSegment], ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Positions of a piecewise-constant-velocity motion at the given times.

    Before the first segment the motion holds the first origin; after a finite last
    segment it holds the final position.
    """
    knots_t = []
    knots_x = []
    knots_y = []
    for seg in segs:
        knots_t.append(seg.t_start)
        knots_x.append(seg.origin.x)
        knots_y.append(seg.origin.y)
        if math.isfinite(seg.t_end):
            p = seg.position_at(seg.t_end)
            knots_t.append(seg.t_end)
            knots_x.append(p.x)
            knots_y.append(p.y)
        else:
            # zero-velocity tail: a single knot pins the position from t_start on
            break
    x = np.interp(ts, knots_t, knots_x)
    y = np.interp(ts, knots_t, knots_y)
    return x, y
