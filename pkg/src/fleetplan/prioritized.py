"""Prioritized multi-robot planning with start blocking and failure-driven re-scheduling.

Robots are planned one at a time in priority order (shortest start-goal distance
first). Each robot treats all already-planned trajectories as moving obstacles and
the start positions of all not-yet-planned robots as stationary disks during
[0, ssi_duration]. When a robot cannot be planned, it is promoted to the front of
the ordering and planning restarts from scratch, within a reschedule budget.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .grid import GridMap, cells_overlapping_disk
from .sipp import (
    ObstacleIndex,
    PlannerConfig,
    RobotSpec,
    Trajectory,
    plan_single,
)


@dataclass(frozen=True)
class Instance:
    grid: GridMap
    robots: tuple[RobotSpec, ...]


def check_instance(instance: Instance) -> list[str]:
    """Instance invariant violations, empty when the instance is well-formed."""
    problems: list[str] = []
    g = instance.grid
    for idx, robot in enumerate(instance.robots):
        for name, cfg in (("start", robot.start), ("goal", robot.goal)):
            for cell in cells_overlapping_disk(cfg.point(), robot.radius):
                if g.is_blocked(cell):
                    problems.append(f"robot {idx} {name} overlaps blocked cell {tuple(cell)}")
                    break
            if (cfg.x - 0.5) != math.floor(cfg.x - 0.5) or (cfg.y - 0.5) != math.floor(cfg.y - 0.5):
                problems.append(f"robot {idx} {name} is not at a cell center")
    n = len(instance.robots)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = instance.robots[i], instance.robots[j]
            if math.dist((a.start.x, a.start.y), (b.start.x, b.start.y)) < a.radius + b.radius:
                problems.append(f"starts of robots {i} and {j} overlap")
            if math.dist((a.goal.x, a.goal.y), (b.goal.x, b.goal.y)) < a.radius + b.radius:
                problems.append(f"goals of robots {i} and {j} overlap")
    return problems


def assign_priorities(instance: Instance) -> list[int]:
    """Robot indices sorted by ascending start-goal distance; ties keep input order."""
    def dist(idx: int) -> float:
        r = instance.robots[idx]
        return math.dist((r.start.x, r.start.y), (r.goal.x, r.goal.y))

    return sorted(range(len(instance.robots)), key=dist)


@dataclass(frozen=True)
class Solution:
    trajectories: tuple[Trajectory, ...]  # ordered by robot index
    flowtime: float
    makespan: float
    attempts: int
    elapsed: float = field(compare=False, default=0.0)


@dataclass(frozen=True)
class PlanFailure:
    reason: str  # "top_priority_unsolvable" | "reschedule_budget_exhausted" | "timeout"
    robot: int
    attempts: int
    elapsed: float = field(compare=False, default=0.0)


def plan_all(instance: Instance, cfg: PlannerConfig) -> Solution | PlanFailure:
    """Plan every robot, re-scheduling on failure by promoting the failed robot.

    Returns a Solution whose trajectories are indexed by robot, or a PlanFailure
    naming the failing robot and whether the cause was an unsolvable top-priority
    robot, an exhausted reschedule budget, or the wall-clock timeout.
    """
    t0 = time.monotonic()
    deadline = t0 + cfg.timeout
    robots = instance.robots
    n = len(robots)
    if n == 0:
        return Solution((), 0.0, 0.0, 1, time.monotonic() - t0)
    if cfg.priority_scheme == "distance_ascending":
        order = assign_priorities(instance)
    else:
        order = list(range(n))
    max_reschedules = cfg.max_reschedules if cfg.max_reschedules is not None else n
    reach = max(r.radius for r in robots) + 1e-3
    static_cache: dict = {}
    attempts = 0
    reschedules = 0

    while True:
        attempts += 1
        index = ObstacleIndex(reach=reach)
        ssi_handles: dict[int, int] = {}
        if cfg.ssi_duration > 0.0:
            for ridx in order[1:]:
                r = robots[ridx]
                ssi_handles[ridx] = index.add_stationary_disk(
                    r.start.x, r.start.y, r.radius, 0.0, cfg.ssi_duration
                )
        trajectories: dict[int, Trajectory] = {}
        failed: tuple[int, str] | None = None
        for pos, ridx in enumerate(order):
            handle = ssi_handles.pop(ridx, None)
            if handle is not None:
                index.remove(handle)
            result = plan_single(
                robots[ridx],
                instance.grid,
                index,
                cfg,
                static_cache=static_cache,
                deadline=deadline,
            )
            if result.ok:
                trajectories[ridx] = result.trajectory
                index.add_trajectory(result.trajectory, robots[ridx].radius)
            else:
                failed = (ridx, result.status)
                break
        if failed is None:
            ordered = tuple(trajectories[i] for i in range(n))
            arrivals = [t.arrival_time for t in ordered]
            return Solution(
                trajectories=ordered,
                flowtime=sum(arrivals),
                makespan=max(arrivals),
                attempts=attempts,
                elapsed=time.monotonic() - t0,
            )
        ridx, status = failed
        elapsed = time.monotonic() - t0
        if status == "timeout" or time.monotonic() > deadline:
            return PlanFailure("timeout", ridx, attempts, elapsed)
        if ridx == order[0]:
            return PlanFailure("top_priority_unsolvable", ridx, attempts, elapsed)
        if reschedules >= max_reschedules:
            return PlanFailure("reschedule_budget_exhausted", ridx, attempts, elapsed)
        reschedules += 1
        order = [ridx] + [r for r in order if r != ridx]
