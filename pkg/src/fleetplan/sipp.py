"""Single-robot safe-interval planning with rotations, any-angle moves, and waits.

The planner searches over (cell, safe-interval) nodes. Safe intervals at a cell
certify that a disk of the current robot's radius resting at the cell center is
collision-free against every obstacle trajectory, so waits and in-place rotations
never need extra collision checks; straight translations are checked pairwise
against obstacle motion segments with the closed-form predicate. Departure times
are searched in increments of delta within the source interval.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from heapq import heappop, heappush
from typing import Iterable, Sequence, Union

from .geometry import (
    EPS,
    INF,
    MotionSegment,
    Point2,
    TimeInterval,
    angular_difference_deg,
    circle_entry_exit_times,
    normalize_heading_deg,
)
from .grid import (
    CellCoord,
    GridMap,
    capsule_blocked,
    cell_center,
    cell_of_point,
    cells_near_move,
    cells_overlapping_disk,
)


@dataclass(frozen=True)
class Configuration:
    """A placement (x, y, theta). Start/goal placements sit at cell centers."""

    x: float
    y: float
    theta: float

    def point(self) -> Point2:
        return Point2(self.x, self.y)


@dataclass(frozen=True)
class RobotSpec:
    radius: float
    v_translate: float
    omega_rotate: float  # degrees per time unit; math.inf means free rotation
    start: Configuration
    goal: Configuration

    def __post_init__(self) -> None:
        if self.radius <= 0 or self.v_translate <= 0 or self.omega_rotate <= 0:
            raise ValueError("radius, v_translate and omega_rotate must be positive")


@dataclass(frozen=True)
class Wait:
    x: float
    y: float
    theta: float
    t_start: float
    t_end: float

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start


@dataclass(frozen=True)
class Rotate:
    x: float
    y: float
    theta_from: float
    theta_to: float
    t_start: float
    t_end: float

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start


@dataclass(frozen=True)
class Translate:
    x_from: float
    y_from: float
    x_to: float
    y_to: float
    theta: float
    t_start: float
    t_end: float

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start

    @property
    def length(self) -> float:
        return math.hypot(self.x_to - self.x_from, self.y_to - self.y_from)


Primitive = Union[Wait, Rotate, Translate]


@dataclass(frozen=True)
class Trajectory:
    """Timed primitives starting at t = 0; after the last one the robot parks forever."""

    start: Configuration
    primitives: tuple[Primitive, ...] = ()

    @property
    def arrival_time(self) -> float:
        """End of the last non-wait primitive (trailing waits do not delay arrival)."""
        for p in reversed(self.primitives):
            if not isinstance(p, Wait):
                return p.t_end
        return 0.0

    @property
    def end_time(self) -> float:
        return self.primitives[-1].t_end if self.primitives else 0.0

    def final_configuration(self) -> Configuration:
        x, y, theta = self.start.x, self.start.y, self.start.theta
        for p in self.primitives:
            if isinstance(p, Translate):
                x, y, theta = p.x_to, p.y_to, p.theta
            elif isinstance(p, Rotate):
                theta = p.theta_to
        return Configuration(x, y, theta)

    def segments(self) -> list[MotionSegment]:
        """Lower to constant-velocity motion segments, ending with an unbounded park."""
        segs: list[MotionSegment] = []
        for p in self.primitives:
            if isinstance(p, Translate):
                dur = p.t_end - p.t_start
                if dur > 0.0:
                    vx = (p.x_to - p.x_from) / dur
                    vy = (p.y_to - p.y_from) / dur
                else:
                    vx = vy = 0.0
                segs.append(MotionSegment(Point2(p.x_from, p.y_from), vx, vy, p.t_start, p.t_end))
            else:
                if p.t_end > p.t_start:
                    segs.append(MotionSegment(Point2(p.x, p.y), 0.0, 0.0, p.t_start, p.t_end))
        last = self.final_configuration()
        segs.append(MotionSegment(Point2(last.x, last.y), 0.0, 0.0, self.end_time, INF))
        return segs


@dataclass(frozen=True)
class SafeInterval:
    cell: CellCoord
    window: TimeInterval
    index: int


@dataclass(frozen=True)
class SearchNode:
    """Immutable search record; node identity in the search is (cell, interval index)."""

    cell: CellCoord
    interval: SafeInterval
    g: float
    h: float
    heading: float
    parent: "SearchNode | None" = None
    depart: float = 0.0  # departure time from the parent along the arriving move


@dataclass(frozen=True)
class PlannerConfig:
    delta: float = 0.1
    ssi_duration: float = 3.0
    timeout: float = 60.0
    neighborhood_k: int = 2
    max_reschedules: int | None = None  # None means one promotion per robot
    priority_scheme: str = "distance_ascending"  # or "as_given"
    wait_floor: float = 0.0  # minimum wait inserted before every translation
    any_angle: bool = True

    def __post_init__(self) -> None:
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.ssi_duration < 0:
            raise ValueError("ssi_duration must be non-negative")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.neighborhood_k < 1:
            raise ValueError("neighborhood_k must be at least 1")
        if self.priority_scheme not in ("distance_ascending", "as_given"):
            raise ValueError(f"unknown priority scheme {self.priority_scheme!r}")
        if self.wait_floor < 0:
            raise ValueError("wait_floor must be non-negative")


@dataclass
class PlanResult:
    trajectory: Trajectory | None
    status: str  # "success" | "exhausted" | "timeout" | "infeasible"
    expansions: int = 0

    @property
    def ok(self) -> bool:
        return self.status == "success"


def neighborhood_moves(k: int) -> tuple[tuple[int, int], ...]:
    """Move vectors of the order-k grid neighborhood: 4 for k=1, 8 for k=2, 16 for k=3...

    Each refinement inserts the vector sum of every pair of angularly adjacent
    vectors, doubling the count.
    """
    if k < 1:
        raise ValueError("neighborhood order must be at least 1")
    if k == 1:
        return ((1, 0), (0, 1), (-1, 0), (0, -1))
    vecs = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
    for _ in range(k - 2):
        refined = []
        for a, b in zip(vecs, vecs[1:] + vecs[:1]):
            refined.append(a)
            refined.append((a[0] + b[0], a[1] + b[1]))
        vecs = refined
    return tuple(vecs)


class _ObSeg:
    """One obstacle motion segment with its radius; parked marks an unbounded goal wait."""

    __slots__ = ("seg", "radius", "parked", "uid")

    def __init__(self, seg: MotionSegment, radius: float, parked: bool, uid: int):
        self.seg = seg
        self.radius = radius
        self.parked = parked
        self.uid = uid


ObstacleList = Sequence[tuple[Trajectory, float]]


def _segments_min_dist2(ax, ay, abx, aby, cx, cy, cdx, cdy) -> float:
    """Squared distance between segments a..a+ab and c..c+cd.

    Crossing segments give zero; otherwise the minimum involves an endpoint, so
    four point-to-segment distances cover every case, including degenerate and
    parallel segments. Near-parallel rounding can only miss a crossing whose
    separation is already negligible, erring toward larger reported distance
    never smaller, which keeps callers that prune on a lower bound sound.
    """
    acx = cx - ax
    acy = cy - ay
    rxs = abx * cdy - aby * cdx
    if rxs != 0.0:
        t = (acx * cdy - acy * cdx) / rxs
        u = (acx * aby - acy * abx) / rxs
        if 0.0 <= t <= 1.0 and 0.0 <= u <= 1.0:
            return 0.0
    ab2 = abx * abx + aby * aby
    cd2 = cdx * cdx + cdy * cdy
    best = INF
    for px, py in ((cx, cy), (cx + cdx, cy + cdy)):
        if ab2 > 0.0:
            t = ((px - ax) * abx + (py - ay) * aby) / ab2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            qx = px - (ax + t * abx)
            qy = py - (ay + t * aby)
        else:
            qx = px - ax
            qy = py - ay
        d = qx * qx + qy * qy
        if d < best:
            best = d
    for px, py in ((ax, ay), (ax + abx, ay + aby)):
        if cd2 > 0.0:
            t = ((px - cx) * cdx + (py - cy) * cdy) / cd2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            qx = px - (cx + t * cdx)
            qy = py - (cy + t * cdy)
        else:
            qx = px - cx
            qy = py - cy
        d = qx * qx + qy * qy
        if d < best:
            best = d
    return best


class ObstacleIndex:
    """Bucketed spatial index over obstacle motion segments.

    Each segment is registered in every grid cell within `reach` plus its own radius
    of the segment's bounding box, so cell queries are complete for any querying
    robot of radius <= reach. Additions return handles that can be removed again
    (used for temporary start-blocking disks).
    """

    def __init__(self, reach: float):
        if reach <= 0:
            raise ValueError("reach must be positive")
        self.reach = reach
        self._buckets: dict[tuple[int, int], dict[int, _ObSeg]] = {}
        self._handles: dict[int, list[tuple[tuple[int, int], int]]] = {}
        self._next_uid = 0
        self._next_handle = 0

    def _insert_segment(self, entry: _ObSeg, placements: list[tuple[tuple[int, int], int]]) -> None:
        seg = entry.seg
        pad = entry.radius + self.reach
        x0, y0 = seg.origin.x, seg.origin.y
        if math.isfinite(seg.t_end):
            x1 = x0 + seg.vx * (seg.t_end - seg.t_start)
            y1 = y0 + seg.vy * (seg.t_end - seg.t_start)
        else:
            x1, y1 = x0, y0  # unbounded segments are zero-velocity parks
        i_lo = math.floor(min(x0, x1) - pad)
        i_hi = math.floor(max(x0, x1) + pad)
        j_lo = math.floor(min(y0, y1) - pad)
        j_hi = math.floor(max(y0, y1) + pad)
        for i in range(i_lo, i_hi + 1):
            for j in range(j_lo, j_hi + 1):
                self._buckets.setdefault((i, j), {})[entry.uid] = entry
                placements.append(((i, j), entry.uid))

    def _add_segments(self, segs: Iterable[tuple[MotionSegment, float, bool]]) -> int:
        placements: list[tuple[tuple[int, int], int]] = []
        for seg, radius, parked in segs:
            entry = _ObSeg(seg, radius, parked, self._next_uid)
            self._next_uid += 1
            self._insert_segment(entry, placements)
        handle = self._next_handle
        self._next_handle += 1
        self._handles[handle] = placements
        return handle

    def add_trajectory(self, traj: Trajectory, radius: float) -> int:
        rows = [(seg, radius, math.isinf(seg.t_end)) for seg in traj.segments()]
        return self._add_segments(rows)

    def add_stationary_disk(self, x: float, y: float, radius: float, t_start: float, t_end: float) -> int:
        seg = MotionSegment(Point2(x, y), 0.0, 0.0, t_start, t_end)
        return self._add_segments([(seg, radius, math.isinf(t_end))])

    def remove(self, handle: int) -> None:
        for key, uid in self._handles.pop(handle):
            bucket = self._buckets.get(key)
            if bucket is not None:
                bucket.pop(uid, None)

    def segments_near_cell(self, cell: CellCoord) -> list[_ObSeg]:
        bucket = self._buckets.get((cell[0], cell[1]))
        return list(bucket.values()) if bucket else []

    def segments_near_cells(self, cells: Iterable[CellCoord]) -> list[_ObSeg]:
        seen: set[int] = set()
        out: list[_ObSeg] = []
        for c in cells:
            bucket = self._buckets.get((c[0], c[1]))
            if not bucket:
                continue
            for uid, entry in bucket.items():
                if uid not in seen:
                    seen.add(uid)
                    out.append(entry)
        return out

    def candidates_for_move(
        self,
        cells: Iterable[CellCoord],
        r_cur: float,
        sx: float,
        sy: float,
        ex: float,
        ey: float,
    ) -> list[tuple]:
        """Flattened obstacle candidates for a move from (sx, sy) to (ex, ey).

        Tuples are (t_end, t_start, origin_x, origin_y, vx, vy, inflated_r2, parked)
        sorted by ascending end time, with inflated_r2 = (r_cur + radius)^2 - EPS,
        the collision threshold on squared separation. Parked segments end at
        infinity and land last. Segments whose whole path keeps at least the
        inflated radius from the move's path can never collide at any departure
        time and are dropped here, which is exact because time alignment can only
        increase the separation over its spatial minimum.
        """
        abx = ex - sx
        aby = ey - sy
        seen: set[int] = set()
        out: list[tuple] = []
        for c in cells:
            bucket = self._buckets.get((c[0], c[1]))
            if not bucket:
                continue
            for uid, e in bucket.items():
                if uid in seen:
                    continue
                seen.add(uid)
                seg = e.seg
                r_sum = r_cur + e.radius
                rr2 = r_sum * r_sum - EPS
                bx = seg.origin.x
                by = seg.origin.y
                if math.isfinite(seg.t_end):
                    pdx = seg.vx * (seg.t_end - seg.t_start)
                    pdy = seg.vy * (seg.t_end - seg.t_start)
                else:
                    pdx = 0.0
                    pdy = 0.0
                if _segments_min_dist2(sx, sy, abx, aby, bx, by, pdx, pdy) >= rr2:
                    continue
                out.append((seg.t_end, seg.t_start, bx, by, seg.vx, seg.vy, rr2, e.parked))
        out.sort()
        return out

    @classmethod
    def from_obstacles(cls, obstacles: ObstacleList, reach: float) -> "ObstacleIndex":
        idx = cls(reach=reach)
        for traj, radius in obstacles:
            idx.add_trajectory(traj, radius)
        return idx


def _as_index(obstacles: ObstacleList | ObstacleIndex, reach: float) -> ObstacleIndex:
    if isinstance(obstacles, ObstacleIndex):
        if obstacles.reach + 1e-12 < reach:
            raise ValueError(
                f"obstacle index reach {obstacles.reach} is below the querying radius {reach}"
            )
        return obstacles
    return ObstacleIndex.from_obstacles(obstacles, reach=reach)


def compute_safe_intervals(
    cell: CellCoord,
    r_cur: float,
    obstacles: ObstacleList | ObstacleIndex,
) -> list[SafeInterval]:
    """Maximal disjoint intervals during which a disk of radius r_cur may rest at the cell center.

    Collision windows are collected per obstacle segment at inflated radius
    r_cur + r_obstacle, unioned, and complemented over [0, inf).
    """
    index = _as_index(obstacles, reach=r_cur)
    center = cell_center(CellCoord(cell[0], cell[1]))
    windows: list[tuple[float, float]] = []
    for entry in index.segments_near_cell(cell):
        w = circle_entry_exit_times(entry.seg, center, r_cur + entry.radius)
        if w is not None and w.t_f > 0.0:
            windows.append((max(w.t_s, 0.0), w.t_f))
    windows.sort()
    merged: list[list[float]] = []
    for s, f in windows:
        if merged and s <= merged[-1][1] + EPS:
            if f > merged[-1][1]:
                merged[-1][1] = f
        else:
            merged.append([s, f])
    out: list[SafeInterval] = []
    t = 0.0
    cell = CellCoord(cell[0], cell[1])
    for s, f in merged:
        if s > t:
            out.append(SafeInterval(cell, TimeInterval(t, s), len(out)))
        t = f
        if math.isinf(t):
            break
    if not math.isinf(t):
        out.append(SafeInterval(cell, TimeInterval(t, INF), len(out)))
    return out


def _earliest_arrival_core(
    x0: float,
    y0: float,
    g: float,
    heading_from: float,
    window_from: TimeInterval,
    x1: float,
    y1: float,
    window_to: TimeInterval,
    robot: RobotSpec,
    candidates: list[tuple],
    delta: float,
    wait_floor: float,
) -> tuple[float, float, float] | None:
    """Earliest feasible departure on the delta lattice against flattened candidates.

    The inner test inlines translating_disks_collide on the temporal overlap of
    the move with each candidate; both time filters reproduce exactly the cases
    where the closed form reports no shared instant.
    """
    dx = x1 - x0
    dy = y1 - y0
    dist = math.hypot(dx, dy)
    if dist <= 0.0:
        return None
    heading = normalize_heading_deg(math.degrees(math.atan2(dy, dx)))
    rot_time = angular_difference_deg(heading_from, heading) / robot.omega_rotate
    dur = dist / robot.v_translate
    vx = dx / dur
    vy = dy / dur
    base = g + rot_time + wait_floor
    if base > window_from.t_f:
        return None
    # jump straight to the first k whose arrival can reach the target window
    k = 0
    lead = window_to.t_s - dur - base
    if lead > 0.0:
        k = max(0, math.ceil(lead / delta - 1e-12))
    n_cand = len(candidates)
    lo = 0
    dep_limit = window_from.t_f
    arr_limit = window_to.t_f
    arr_open = window_to.t_s
    while True:
        t_dep = base + k * delta
        if t_dep > dep_limit:
            return None
        t_arr = t_dep + dur
        if t_arr > arr_limit:
            return None
        if t_arr < arr_open:
            k += 1
            continue
        # segments that ended before this departure can never overlap a later one
        while lo < n_cand and candidates[lo][0] < t_dep:
            lo += 1
        if lo == n_cand:
            return (t_dep, t_arr, heading)
        hit = False
        for idx in range(lo, n_cand):
            t1, t0, bx, by, vbx, vby, rr2, parked = candidates[idx]
            if hit and not parked:
                continue  # only a parked collision can still change the outcome
            if t0 > t_arr:
                continue
            w_s = t_dep if t_dep > t0 else t0
            w_e = t_arr if t_arr < t1 else t1
            px = (x0 + vx * (w_s - t_dep)) - (bx + vbx * (w_s - t0))
            py = (y0 + vy * (w_s - t_dep)) - (by + vby * (w_s - t0))
            dvx = vx - vbx
            dvy = vy - vby
            dv2 = dvx * dvx + dvy * dvy
            if dv2 <= EPS:
                tau = 0.0
            else:
                tau = -(px * dvx + py * dvy) / dv2
                if tau < 0.0:
                    tau = 0.0
                dur_w = w_e - w_s
                if tau > dur_w:
                    tau = dur_w
            mx = px + dvx * tau
            my = py + dvy * tau
            if mx * mx + my * my < rr2:
                if parked:
                    # parked blocker: every later departure overlaps it even deeper
                    return None
                hit = True
        if not hit:
            return (t_dep, t_arr, heading)
        k += 1


def earliest_arrival(
    from_node: SearchNode,
    to_cell: CellCoord,
    to_interval: SafeInterval,
    robot: RobotSpec,
    obstacles: ObstacleList | ObstacleIndex,
    delta: float,
    wait_floor: float = 0.0,
) -> tuple[float, float, float] | None:
    """Smallest departure g + rotation + wait_floor + k*delta giving a collision-free move.

    Returns (t_depart, t_arrive, heading) or None when the source window closes, the
    target window closes, or a forever-parked obstacle blocks the move.
    """
    index = _as_index(obstacles, reach=robot.radius)
    src = cell_center(from_node.cell)
    dst = cell_center(to_cell)
    cells = cells_near_move(src, dst, robot.radius)
    candidates = index.candidates_for_move(cells, robot.radius, src.x, src.y, dst.x, dst.y)
    return _earliest_arrival_core(
        src.x,
        src.y,
        from_node.g,
        from_node.heading,
        from_node.interval.window,
        dst.x,
        dst.y,
        to_interval.window,
        robot,
        candidates,
        delta,
        wait_floor,
    )


def _final_rotation(heading: float, goal_theta: float, omega: float) -> float:
    return angular_difference_deg(heading, normalize_heading_deg(goal_theta)) / omega


def _reconstruct(goal_node: SearchNode, robot: RobotSpec) -> Trajectory:
    chain: list[SearchNode] = []
    node: SearchNode | None = goal_node
    while node is not None:
        chain.append(node)
        node = node.parent
    chain.reverse()
    prims: list[Primitive] = []
    for parent, child in zip(chain, chain[1:]):
        px, py = cell_center(parent.cell).x, cell_center(parent.cell).y
        cx, cy = cell_center(child.cell).x, cell_center(child.cell).y
        rot = angular_difference_deg(parent.heading, child.heading) / robot.omega_rotate
        t0 = parent.g
        t1 = t0 + rot
        if rot > 0.0:
            prims.append(Rotate(px, py, parent.heading, child.heading, t0, t1))
        if child.depart - t1 > 1e-12:
            prims.append(Wait(px, py, child.heading, t1, child.depart))
        prims.append(Translate(px, py, cx, cy, child.heading, child.depart, child.g))
    goal_theta = normalize_heading_deg(robot.goal.theta)
    last_heading = chain[-1].heading
    rot = _final_rotation(last_heading, goal_theta, robot.omega_rotate)
    if rot > 0.0:
        gx, gy = cell_center(chain[-1].cell).x, cell_center(chain[-1].cell).y
        prims.append(Rotate(gx, gy, last_heading, goal_theta, chain[-1].g, chain[-1].g + rot))
    start = Configuration(
        cell_center(chain[0].cell).x,
        cell_center(chain[0].cell).y,
        normalize_heading_deg(robot.start.theta),
    )
    return Trajectory(start, tuple(prims))


def _disk_fits(grid: GridMap, p: Point2, radius: float) -> bool:
    for cell in cells_overlapping_disk(p, radius):
        if grid.is_blocked(cell):
            return False
    return True


StaticCache = dict


def plan_single(
    robot: RobotSpec,
    grid: GridMap,
    obstacles: ObstacleList | ObstacleIndex,
    cfg: PlannerConfig,
    *,
    static_cache: StaticCache | None = None,
    deadline: float | None = None,
) -> PlanResult:
    """Earliest-arrival trajectory for one robot against fixed obstacle trajectories.

    Best-first search ordered by f = g + h with h = straight-line time to goal.
    Ties break on larger g, then smaller (cell row, cell column, interval index).
    The goal is accepted in an interval extending to infinity, since the robot
    parks there forever; the final rotation to the goal heading happens inside
    that interval and is therefore collision-free by construction.
    """
    index = _as_index(obstacles, reach=robot.radius)
    start_p = robot.start.point()
    goal_p = robot.goal.point()
    if not _disk_fits(grid, start_p, robot.radius) or not _disk_fits(grid, goal_p, robot.radius):
        return PlanResult(None, "infeasible")
    start_cell = cell_of_point(start_p)
    goal_cell = cell_of_point(goal_p)
    if deadline is None:
        deadline = time.monotonic() + cfg.timeout

    intervals_by_cell: dict[CellCoord, list[SafeInterval]] = {}

    def intervals_at(cell: CellCoord) -> list[SafeInterval]:
        ivs = intervals_by_cell.get(cell)
        if ivs is None:
            ivs = compute_safe_intervals(cell, robot.radius, index)
            intervals_by_cell[cell] = ivs
        return ivs

    if static_cache is None:
        static_cache = {}

    def swept_free(c1: CellCoord, c2: CellCoord) -> tuple | None:
        """Near-cells of the center-to-center move for index queries, or None when blocked."""
        if c1 <= c2:
            key = (c1[0], c1[1], c2[0], c2[1], robot.radius)
        else:
            key = (c2[0], c2[1], c1[0], c1[1], robot.radius)
        cached = static_cache.get(key, False)
        if cached is not False:
            return cached
        a = cell_center(c1)
        b = cell_center(c2)
        result: tuple | None = None
        if not capsule_blocked(grid, a, b, robot.radius):
            result = cells_near_move(a, b, robot.radius)
        static_cache[key] = result
        return result

    near_segs: dict = {}

    def move_candidates(c1: CellCoord, c2: CellCoord) -> list | None:
        """Obstacle segments near the move sorted by end time, or None when blocked.

        Memoized per search: the obstacle index is frozen while one robot plans.
        """
        if c1 <= c2:
            key = (c1[0], c1[1], c2[0], c2[1])
        else:
            key = (c2[0], c2[1], c1[0], c1[1])
        got = near_segs.get(key, False)
        if got is not False:
            return got
        cells = swept_free(c1, c2)
        result: list | None = None
        if cells is not None:
            a = cell_center(c1)
            b = cell_center(c2)
            result = index.candidates_for_move(cells, robot.radius, a.x, a.y, b.x, b.y)
        near_segs[key] = result
        return result

    start_ivs = intervals_at(start_cell)
    if not start_ivs or start_ivs[0].window.t_s > 0.0:
        return PlanResult(None, "infeasible")

    goal_center = cell_center(goal_cell)
    v = robot.v_translate

    def h_of(cell: CellCoord) -> float:
        return math.hypot(cell[0] + 0.5 - goal_center.x, cell[1] + 0.5 - goal_center.y) / v

    start_node = SearchNode(
        cell=start_cell,
        interval=start_ivs[0],
        g=0.0,
        h=h_of(start_cell),
        heading=normalize_heading_deg(robot.start.theta),
    )
    moves = neighborhood_moves(cfg.neighborhood_k)
    best_g: dict[tuple[int, int, int], float] = {(start_cell[0], start_cell[1], 0): 0.0}
    open_heap: list = []
    heappush(open_heap, (start_node.h, 0.0, start_cell[1], start_cell[0], 0, start_node))
    expansions = 0
    wait_floor = cfg.wait_floor
    delta = cfg.delta
    any_angle = cfg.any_angle

    while open_heap:
        f, neg_g, _, _, _, node = heappop(open_heap)
        key = (node.cell[0], node.cell[1], node.interval.index)
        if node.g > best_g.get(key, INF):
            continue  # superseded by a cheaper arrival
        if time.monotonic() > deadline:
            return PlanResult(None, "timeout", expansions)
        if node.cell == goal_cell and math.isinf(node.interval.window.t_f):
            return PlanResult(_reconstruct(node, robot), "success", expansions)
        expansions += 1
        for di, dj in moves:
            nc = CellCoord(node.cell[0] + di, node.cell[1] + dj)
            via_candidates = move_candidates(node.cell, nc)
            if via_candidates is None:
                continue
            parent = node.parent if any_angle else None
            parent_candidates = None
            if parent is not None:
                parent_candidates = move_candidates(parent.cell, nc)
            src = cell_center(node.cell)
            dst = cell_center(nc)
            for iv in intervals_at(nc):
                if iv.window.t_f < node.g:
                    continue
                best = _earliest_arrival_core(
                    src.x, src.y, node.g, node.heading,
                    node.interval.window, dst.x, dst.y, iv.window,
                    robot, via_candidates, delta, wait_floor,
                )
                link = node
                if parent_candidates is not None:
                    psrc = cell_center(parent.cell)
                    shortcut = _earliest_arrival_core(
                        psrc.x, psrc.y, parent.g, parent.heading,
                        parent.interval.window, dst.x, dst.y, iv.window,
                        robot, parent_candidates, delta, wait_floor,
                    )
                    if shortcut is not None and (best is None or shortcut[1] <= best[1]):
                        # prefer the shortcut on ties: fewer, longer segments
                        best = shortcut
                        link = parent
                if best is None:
                    continue
                t_dep, t_arr, heading = best
                nkey = (nc[0], nc[1], iv.index)
                if t_arr < best_g.get(nkey, INF):
                    best_g[nkey] = t_arr
                    child = SearchNode(
                        cell=nc,
                        interval=iv,
                        g=t_arr,
                        h=h_of(nc),
                        heading=heading,
                        parent=link,
                        depart=t_dep,
                    )
                    heappush(
                        open_heap,
                        (t_arr + child.h, -t_arr, nc[1], nc[0], iv.index, child),
                    )
    return PlanResult(None, "exhausted", expansions)
