"""Random instance generation: benchmark maps and robot fleets.

Fleets mix three robot types (small-and-fast, medium, large-and-slow),
placed round-robin so a prefix of the fleet always contains an equal number
of each type. A meta-instance is a large fleet; truncating it per type
yields the family of smaller instances used for success-rate sweeps.
"""

from __future__ import annotations

import math
import random

from .geometry import Point2
from .grid import GridMap, cells_overlapping_disk
from .prioritized import Instance, check_instance
from .sipp import Configuration, RobotSpec

# (radius in cells, translation speed in cells per time unit)
ROBOT_TYPES = ((0.3, 1.5), (0.5, 1.0), (1.0, 0.5))
ROTATION_SPEED = 180.0  # degrees per time unit, shared by every type


class GenerationError(RuntimeError):
    """Random placement failed within the retry budget."""


def generate_grid(
    width: int,
    height: int,
    obstacles: int = 0,
    obstacle_shape: tuple[int, int] = (20, 2),
    rng: random.Random | None = None,
    max_tries: int = 2000,
) -> GridMap:
    """An empty map, or one with non-overlapping rectangular obstacles.

    Each obstacle is the given shape or its 90-degree rotation, placed
    uniformly at random fully inside the map.
    """
    if width < 1 or height < 1:
        raise ValueError("map dimensions must be positive")
    rng = rng if rng is not None else random.Random(0)
    blocked: set[tuple[int, int]] = set()
    ow, oh = obstacle_shape
    for k in range(obstacles):
        for _ in range(max_tries):
            w, h = (ow, oh) if rng.random() < 0.5 else (oh, ow)
            if w > width or h > height:
                continue
            i0 = rng.randrange(width - w + 1)
            j0 = rng.randrange(height - h + 1)
            cells = {(i, j) for i in range(i0, i0 + w) for j in range(j0, j0 + h)}
            if not cells & blocked:
                blocked |= cells
                break
        else:
            raise GenerationError(
                f"could not place obstacle {k + 1} of {obstacles} "
                f"({ow}x{oh} cells) without overlap after {max_tries} tries"
            )
    return GridMap(width, height, frozenset(blocked))


def _disk_fits(grid: GridMap, center: tuple[float, float], radius: float) -> bool:
    return not any(
        grid.is_blocked(c) for c in cells_overlapping_disk(Point2(*center), radius)
    )


def _place_fleet(
    grid: GridMap,
    radii: list[float],
    rng: random.Random,
    taken: list[tuple[float, float, float]],
    what: str,
    max_tries: int,
) -> list[tuple[float, float]]:
    """Random distinct cell centers where each disk fits and none overlap."""
    placed: list[tuple[float, float]] = []
    for idx, r in enumerate(radii):
        for _ in range(max_tries):
            cx = rng.randrange(grid.width) + 0.5
            cy = rng.randrange(grid.height) + 0.5
            if not _disk_fits(grid, (cx, cy), r):
                continue
            if any(math.dist((cx, cy), (px, py)) < r + pr for px, py, pr in taken):
                continue
            placed.append((cx, cy))
            taken.append((cx, cy, r))
            break
        else:
            raise GenerationError(
                f"could not place {what} for robot {idx} (radius {r}) "
                f"after {max_tries} tries"
            )
    return placed


def generate_meta_instance(
    width: int,
    height: int,
    robots_per_type: int,
    seed: int,
    obstacles: int = 0,
    obstacle_shape: tuple[int, int] = (20, 2),
    max_tries: int = 2000,
) -> Instance:
    """A random instance with robots_per_type robots of each type, interleaved
    round-robin, on a fresh random map. Deterministic for a fixed seed."""
    rng = random.Random(seed)
    grid = generate_grid(width, height, obstacles, obstacle_shape, rng, max_tries)
    types = [ROBOT_TYPES[k % len(ROBOT_TYPES)] for k in range(robots_per_type * len(ROBOT_TYPES))]
    radii = [t[0] for t in types]
    starts = _place_fleet(grid, radii, rng, [], "start", max_tries)
    goals = _place_fleet(grid, radii, rng, [], "goal", max_tries)
    robots = tuple(
        RobotSpec(
            r,
            v,
            ROTATION_SPEED,
            Configuration(sx, sy, rng.uniform(0.0, 360.0)),
            Configuration(gx, gy, rng.uniform(0.0, 360.0)),
        )
        for (r, v), (sx, sy), (gx, gy) in zip(types, starts, goals)
    )
    instance = Instance(grid, robots)
    problems = check_instance(instance)
    if problems:
        raise GenerationError(f"generated instance is invalid: {problems[0]}")
    return instance


def truncate_per_type(instance: Instance, robots_per_type: int) -> Instance:
    """The sub-instance keeping the first robots_per_type robots of each type.

    Type is identified by (radius, v_translate); relative order is preserved.
    """
    kept = []
    counts: dict[tuple[float, float], int] = {}
    for robot in instance.robots:
        key = (robot.radius, robot.v_translate)
        if counts.get(key, 0) < robots_per_type:
            counts[key] = counts.get(key, 0) + 1
            kept.append(robot)
    return Instance(instance.grid, tuple(kept))


def generate_instances(
    count: int,
    width: int,
    height: int,
    robots_per_type: int,
    seed: int,
    obstacles: int = 0,
    obstacle_shape: tuple[int, int] = (20, 2),
    max_tries: int = 2000,
) -> list[Instance]:
    """count independent random instances; instance k uses seed + k."""
    return [
        generate_meta_instance(
            width, height, robots_per_type, seed + k, obstacles, obstacle_shape, max_tries
        )
        for k in range(count)
    ]
