"""Independent certification of multi-robot trajectory sets.

This module re-derives everything from the primitives on purpose: segment timelines,
pairwise minimum separations (closed-form quadratic evaluated here, not imported),
and static clearances (ternary search over the move parameter against per-cell
distances). It shares no collision code with the planner, so a planner bug cannot
hide behind a matching validator bug.

Tangency tolerance: a pair is in conflict only when the squared separation drops
below (r_i + r_j)^2 - 1e-8. Planned trajectories legally touch obstacle disks at
interval boundaries (open-disk semantics), so exact tangency must not be flagged;
the 1e-8 slack is about 2.5e-9 cells of linear penetration at unit radii.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .prioritized import Instance, Solution
from .sipp import Rotate, Trajectory, Translate, Wait

CONFLICT_TOL = 1e-8  # squared-cell-units slack under the required separation
STRUCT_TOL = 1e-9

_MARGIN = 1.0  # sampled mode: extra horizon beyond the last arrival


@dataclass(frozen=True)
class Conflict:
    kind: str  # "pairwise" | "static" | "structural"
    robots: tuple[int, ...]
    time: float
    separation: float
    required: float
    detail: str = ""


@dataclass(frozen=True)
class ConflictReport:
    mode: str
    conflicts: tuple[Conflict, ...]

    @property
    def certified(self) -> bool:
        return not self.conflicts


def _timeline(traj: Trajectory) -> list[tuple[float, float, float, float, float, float]]:
    """(x, y, vx, vy, t0, t1) rows re-derived from primitives, ending in an infinite park."""
    rows = []
    x, y = traj.start.x, traj.start.y
    for p in traj.primitives:
        dur = p.t_end - p.t_start
        if isinstance(p, Translate):
            if dur > 0.0:
                rows.append(
                    (p.x_from, p.y_from, (p.x_to - p.x_from) / dur, (p.y_to - p.y_from) / dur, p.t_start, p.t_end)
                )
            x, y = p.x_to, p.y_to
        else:
            if dur > 0.0:
                rows.append((p.x, p.y, 0.0, 0.0, p.t_start, p.t_end))
    end = traj.primitives[-1].t_end if traj.primitives else 0.0
    rows.append((x, y, 0.0, 0.0, end, math.inf))
    return rows


def _structural_errors(idx: int, traj: Trajectory, instance: Instance, strict_timing: bool) -> list[Conflict]:
    robot = instance.robots[idx]
    out: list[Conflict] = []

    def err(t: float, detail: str) -> None:
        out.append(Conflict("structural", (idx,), t, 0.0, 0.0, detail))

    finite_omega = math.isfinite(robot.omega_rotate)
    x, y = traj.start.x, traj.start.y
    theta = traj.start.theta
    if abs(x - robot.start.x) > STRUCT_TOL or abs(y - robot.start.y) > STRUCT_TOL:
        err(0.0, "trajectory does not start at the robot start position")
    if finite_omega and _ang(theta, robot.start.theta) > STRUCT_TOL:
        err(0.0, "trajectory does not start at the robot start heading")
    t = 0.0
    for k, p in enumerate(traj.primitives):
        if abs(p.t_start - t) > STRUCT_TOL:
            err(p.t_start, f"primitive {k} starts at {p.t_start}, expected {t}")
        if p.t_end < p.t_start:
            err(p.t_start, f"primitive {k} has negative duration")
        t = p.t_end
        if isinstance(p, Translate):
            if abs(p.x_from - x) > STRUCT_TOL or abs(p.y_from - y) > STRUCT_TOL:
                err(p.t_start, f"primitive {k} teleports from ({x}, {y})")
            x, y = p.x_to, p.y_to
            if finite_omega and _ang(p.theta, theta) > STRUCT_TOL:
                err(p.t_start, f"primitive {k} translates at heading {p.theta}, facing {theta}")
            if strict_timing:
                want = math.hypot(p.x_to - p.x_from, p.y_to - p.y_from) / robot.v_translate
                if abs(p.duration - want) > STRUCT_TOL:
                    err(p.t_start, f"primitive {k} duration {p.duration}, expected {want}")
        elif isinstance(p, Rotate):
            if abs(p.x - x) > STRUCT_TOL or abs(p.y - y) > STRUCT_TOL:
                err(p.t_start, f"primitive {k} rotates away from ({x}, {y})")
            if finite_omega and _ang(p.theta_from, theta) > STRUCT_TOL:
                err(p.t_start, f"primitive {k} rotation starts at {p.theta_from}, facing {theta}")
            theta = p.theta_to
            if strict_timing:
                want = _delta_ang(p.theta_from, p.theta_to) / robot.omega_rotate
                if abs(p.duration - want) > STRUCT_TOL:
                    err(p.t_start, f"primitive {k} rotation duration {p.duration}, expected {want}")
        else:
            if abs(p.x - x) > STRUCT_TOL or abs(p.y - y) > STRUCT_TOL:
                err(p.t_start, f"primitive {k} waits away from ({x}, {y})")
            if finite_omega and _ang(p.theta, theta) > STRUCT_TOL:
                err(p.t_start, f"primitive {k} waits at heading {p.theta}, facing {theta}")
    if abs(x - robot.goal.x) > STRUCT_TOL or abs(y - robot.goal.y) > STRUCT_TOL:
        err(t, "trajectory does not end at the goal position")
    if finite_omega and strict_timing and _ang(theta, robot.goal.theta) > STRUCT_TOL:
        err(t, "trajectory does not end at the goal heading")
    return out


def _delta_ang(a: float, b: float) -> float:
    d = math.fmod(b - a, 360.0)
    if d < 0.0:
        d += 360.0
    return 360.0 - d if d > 180.0 else d


def _ang(a: float, b: float) -> float:
    return _delta_ang(a, b)


def _pair_min_separation(
    ra: tuple[float, float, float, float, float, float],
    rb: tuple[float, float, float, float, float, float],
) -> tuple[float, float] | None:
    """(min separation, time) over the temporal overlap of two timeline rows."""
    ax, ay, avx, avy, a0, a1 = ra
    bx, by, bvx, bvy, b0, b1 = rb
    w0 = a0 if a0 > b0 else b0
    w1 = a1 if a1 < b1 else b1
    if w1 < w0:
        return None
    px = (ax + avx * (w0 - a0)) - (bx + bvx * (w0 - b0))
    py = (ay + avy * (w0 - a0)) - (by + bvy * (w0 - b0))
    vx = avx - bvx
    vy = avy - bvy
    best = math.hypot(px, py)
    t_best = w0
    v2 = vx * vx + vy * vy
    if v2 > 0.0:
        dur = w1 - w0
        tau = -(px * vx + py * vy) / v2
        if tau > 0.0:
            if tau > dur:
                tau = dur
            if math.isfinite(tau):
                d = math.hypot(px + vx * tau, py + vy * tau)
                if d < best:
                    best = d
                    t_best = w0 + tau
        if math.isfinite(w1):
            d = math.hypot(px + vx * (w1 - w0), py + vy * (w1 - w0))
            if d < best:
                best = d
                t_best = w1
    return best, t_best


def _check_pair(
    i: int,
    j: int,
    rows_i: list,
    rows_j: list,
    required: float,
) -> Conflict | None:
    """Sweep both timelines in time order; report the earliest violation, if any."""
    threshold = required * required - CONFLICT_TOL
    a = b = 0
    worst = math.inf
    first_t = None
    while a < len(rows_i) and b < len(rows_j):
        ra = rows_i[a]
        rb = rows_j[b]
        got = _pair_min_separation(ra, rb)
        if got is not None:
            d, t_at = got
            if d * d < threshold:
                if first_t is None:
                    first_t = t_at
                if d < worst:
                    worst = d
        if ra[5] <= rb[5]:
            a += 1
        else:
            b += 1
    if first_t is None:
        return None
    return Conflict("pairwise", (i, j), first_t, worst, required)


def _point_cell_clearance(x: float, y: float, i: int, j: int) -> float:
    dx = i - x if x < i else (x - (i + 1) if x > i + 1 else 0.0)
    dy = j - y if y < j else (y - (j + 1) if y > j + 1 else 0.0)
    return math.hypot(dx, dy)


def _move_cell_clearance(x0, y0, x1, y1, i, j) -> tuple[float, float]:
    """(min clearance, parameter) of the move against cell (i, j), by ternary search."""

    def at(t: float) -> float:
        return _point_cell_clearance(x0 + (x1 - x0) * t, y0 + (y1 - y0) * t, i, j)

    lo, hi = 0.0, 1.0
    for _ in range(80):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if at(m1) <= at(m2):
            hi = m2
        else:
            lo = m1
    t = (lo + hi) / 2.0
    candidates = [(at(0.0), 0.0), (at(1.0), 1.0), (at(t), t)]
    return min(candidates)


def _static_conflicts(idx: int, traj: Trajectory, instance: Instance) -> list[Conflict]:
    grid = instance.grid
    r = instance.robots[idx].radius
    out: list[Conflict] = []

    def blocked_cells_near(x_lo, x_hi, y_lo, y_hi):
        for i in range(math.floor(x_lo - r), math.floor(x_hi + r) + 1):
            for j in range(math.floor(y_lo - r), math.floor(y_hi + r) + 1):
                if grid.is_blocked((i, j)):
                    yield i, j

    seen_stationary: set[tuple[float, float]] = set()
    for p in traj.primitives:
        if isinstance(p, Translate):
            for i, j in blocked_cells_near(
                min(p.x_from, p.x_to), max(p.x_from, p.x_to), min(p.y_from, p.y_to), max(p.y_from, p.y_to)
            ):
                d, t_frac = _move_cell_clearance(p.x_from, p.y_from, p.x_to, p.y_to, i, j)
                if d < r - STRUCT_TOL:
                    out.append(
                        Conflict(
                            "static",
                            (idx,),
                            p.t_start + t_frac * p.duration,
                            d,
                            r,
                            f"blocked cell ({i}, {j})",
                        )
                    )
        else:
            key = (p.x, p.y)
            if key in seen_stationary:
                continue
            seen_stationary.add(key)
            for i, j in blocked_cells_near(p.x, p.x, p.y, p.y):
                d = _point_cell_clearance(p.x, p.y, i, j)
                if d < r - STRUCT_TOL:
                    out.append(Conflict("static", (idx,), p.t_start, d, r, f"blocked cell ({i}, {j})"))
    # the final parked position
    final = traj.final_configuration()
    key = (final.x, final.y)
    if key not in seen_stationary:
        for i, j in blocked_cells_near(final.x, final.x, final.y, final.y):
            d = _point_cell_clearance(final.x, final.y, i, j)
            if d < r - STRUCT_TOL:
                out.append(Conflict("static", (idx,), traj.end_time, d, r, f"blocked cell ({i}, {j})"))
    return out


def _knots(traj: Trajectory) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ts = [0.0]
    xs = [traj.start.x]
    ys = [traj.start.y]
    for p in traj.primitives:
        if isinstance(p, Translate):
            if p.t_start > ts[-1]:
                ts.append(p.t_start)
                xs.append(p.x_from)
                ys.append(p.y_from)
            ts.append(p.t_end)
            xs.append(p.x_to)
            ys.append(p.y_to)
    return np.asarray(ts), np.asarray(xs), np.asarray(ys)


def validate_solution(
    solution: Solution,
    instance: Instance,
    mode: str = "analytic",
    dt: float = 1e-3,
    strict_timing: bool = True,
) -> ConflictReport:
    """Certify a solution against the instance.

    mode "analytic" checks every temporally overlapping segment pair in closed form
    and every primitive against blocked cells; mode "sampled" compares pairwise
    positions on a dt grid up to the last arrival plus a margin. Structural problems
    (time gaps, teleports, broken duration laws) are reported alone, before any
    collision checking. strict_timing=False skips the duration and final-heading
    laws, for executed traces whose translations run late.
    """
    if mode not in ("analytic", "sampled"):
        raise ValueError(f"unknown validation mode {mode!r}")
    if len(solution.trajectories) != len(instance.robots):
        return ConflictReport(
            mode, (Conflict("structural", (), 0.0, 0.0, 0.0, "trajectory count mismatch"),)
        )
    structural: list[Conflict] = []
    for idx, traj in enumerate(solution.trajectories):
        structural.extend(_structural_errors(idx, traj, instance, strict_timing))
    if structural:
        return ConflictReport(mode, tuple(structural))

    conflicts: list[Conflict] = []
    n = len(solution.trajectories)
    if mode == "analytic":
        timelines = [_timeline(t) for t in solution.trajectories]
        for i in range(n):
            conflicts.extend(_static_conflicts(i, solution.trajectories[i], instance))
        for i in range(n):
            for j in range(i + 1, n):
                required = instance.robots[i].radius + instance.robots[j].radius
                c = _check_pair(i, j, timelines[i], timelines[j], required)
                if c is not None:
                    conflicts.append(c)
    else:
        horizon = max((t.end_time for t in solution.trajectories), default=0.0) + _MARGIN
        ts = np.arange(0.0, horizon + dt, dt)
        pos = []
        for traj in solution.trajectories:
            kt, kx, ky = _knots(traj)
            pos.append((np.interp(ts, kt, kx), np.interp(ts, kt, ky)))
        for i in range(n):
            for j in range(i + 1, n):
                required = instance.robots[i].radius + instance.robots[j].radius
                d2 = (pos[i][0] - pos[j][0]) ** 2 + (pos[i][1] - pos[j][1]) ** 2
                bad = np.flatnonzero(d2 < required * required - CONFLICT_TOL)
                if bad.size:
                    first = int(bad[0])
                    worst = float(np.sqrt(np.min(d2[bad])))
                    conflicts.append(
                        Conflict("pairwise", (i, j), float(ts[first]), worst, required)
                    )
    return ConflictReport(mode, tuple(conflicts))


def compute_metrics(solution: Solution) -> tuple[float, float]:
    """(flowtime, makespan) recomputed from the primitives, not from stored fields."""
    arrivals = []
    for traj in solution.trajectories:
        t = 0.0
        for p in reversed(traj.primitives):
            if not isinstance(p, Wait):
                t = p.t_end
                break
        arrivals.append(t)
    if not arrivals:
        return 0.0, 0.0
    return sum(arrivals), max(arrivals)
