"""Versioned JSON file formats for instances, solutions, and reports.

Design rules: explicit field names, a version tag in every file, full
round-trip float precision (json emits the shortest digits that parse back
to the same float), two-space indentation, one trailing newline, and keys
written in a fixed order so that write -> read -> write is byte-identical.
Infinite rotation speed is stored as null because JSON has no infinity.
Headings are degrees normalized to [0, 360).
"""

from __future__ import annotations

import json
import math
from typing import Any

from .geometry import normalize_heading_deg
from .grid import GridMap
from .prioritized import Instance, Solution
from .sipp import (
    Configuration,
    PlannerConfig,
    Primitive,
    RobotSpec,
    Rotate,
    Trajectory,
    Translate,
    Wait,
)

INSTANCE_FORMAT = "fleetplan-instance/1"
SOLUTION_FORMAT = "fleetplan-solution/1"
REPORT_FORMAT = "fleetplan-report/1"


class FormatError(ValueError):
    """A file or dictionary does not match the expected format."""


def dumps_canonical(payload: dict) -> str:
    """The single serialization used for every file this package writes."""
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def _require(d: Any, key: str, context: str) -> Any:
    if not isinstance(d, dict) or key not in d:
        raise FormatError(f"{context}: missing field {key!r}")
    return d[key]


def _check_format(d: Any, expected: str) -> None:
    tag = _require(d, "format", expected)
    if tag != expected:
        raise FormatError(f"expected format {expected!r}, found {tag!r}")


def _omega_out(omega: float) -> float | None:
    return None if math.isinf(omega) else omega


def _omega_in(raw: Any) -> float:
    return math.inf if raw is None else float(raw)


def _config_out(cfg: Configuration) -> dict:
    return {"x": cfg.x, "y": cfg.y, "theta": normalize_heading_deg(cfg.theta)}


def _config_in(d: Any, context: str) -> Configuration:
    return Configuration(
        float(_require(d, "x", context)),
        float(_require(d, "y", context)),
        float(_require(d, "theta", context)),
    )


# --- instances ------------------------------------------------------------


def instance_to_dict(instance: Instance) -> dict:
    g = instance.grid
    return {
        "format": INSTANCE_FORMAT,
        "map": {
            "width": g.width,
            "height": g.height,
            "cell_size": 1.0,
            "rows": g.to_rows(),
        },
        "robots": [
            {
                "start": _config_out(r.start),
                "goal": _config_out(r.goal),
                "radius": r.radius,
                "v_translate": r.v_translate,
                "omega_rotate": _omega_out(r.omega_rotate),
            }
            for r in instance.robots
        ],
    }


def instance_from_dict(d: Any) -> Instance:
    _check_format(d, INSTANCE_FORMAT)
    m = _require(d, "map", "instance")
    rows = _require(m, "rows", "instance.map")
    width = int(_require(m, "width", "instance.map"))
    height = int(_require(m, "height", "instance.map"))
    try:
        grid = GridMap.from_rows(rows)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"instance.map.rows: {exc}") from exc
    if grid.width != width or grid.height != height:
        raise FormatError(
            f"instance.map: declared {width}x{height} but rows are "
            f"{grid.width}x{grid.height}"
        )
    robots = []
    for idx, rd in enumerate(_require(d, "robots", "instance")):
        ctx = f"instance.robots[{idx}]"
        try:
            robots.append(
                RobotSpec(
                    float(_require(rd, "radius", ctx)),
                    float(_require(rd, "v_translate", ctx)),
                    _omega_in(_require(rd, "omega_rotate", ctx)),
                    _config_in(_require(rd, "start", ctx), ctx + ".start"),
                    _config_in(_require(rd, "goal", ctx), ctx + ".goal"),
                )
            )
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"{ctx}: {exc}") from exc
    return Instance(grid, tuple(robots))


# --- solutions --------------------------------------------------------------


def _primitive_out(p: Primitive) -> dict:
    if isinstance(p, Wait):
        return {
            "kind": "wait",
            "x": p.x,
            "y": p.y,
            "theta": normalize_heading_deg(p.theta),
            "t_start": p.t_start,
            "t_end": p.t_end,
        }
    if isinstance(p, Rotate):
        return {
            "kind": "rotate",
            "x": p.x,
            "y": p.y,
            "theta_from": normalize_heading_deg(p.theta_from),
            "theta_to": normalize_heading_deg(p.theta_to),
            "t_start": p.t_start,
            "t_end": p.t_end,
        }
    return {
        "kind": "translate",
        "x_from": p.x_from,
        "y_from": p.y_from,
        "x_to": p.x_to,
        "y_to": p.y_to,
        "theta": normalize_heading_deg(p.theta),
        "t_start": p.t_start,
        "t_end": p.t_end,
    }


def _primitive_in(d: Any, context: str) -> Primitive:
    kind = _require(d, "kind", context)
    t0 = float(_require(d, "t_start", context))
    t1 = float(_require(d, "t_end", context))
    if kind == "wait":
        return Wait(
            float(_require(d, "x", context)),
            float(_require(d, "y", context)),
            float(_require(d, "theta", context)),
            t0,
            t1,
        )
    if kind == "rotate":
        return Rotate(
            float(_require(d, "x", context)),
            float(_require(d, "y", context)),
            float(_require(d, "theta_from", context)),
            float(_require(d, "theta_to", context)),
            t0,
            t1,
        )
    if kind == "translate":
        return Translate(
            float(_require(d, "x_from", context)),
            float(_require(d, "y_from", context)),
            float(_require(d, "x_to", context)),
            float(_require(d, "y_to", context)),
            float(_require(d, "theta", context)),
            t0,
            t1,
        )
    raise FormatError(f"{context}: unknown primitive kind {kind!r}")


_CONFIG_FIELDS = (
    "delta",
    "ssi_duration",
    "timeout",
    "neighborhood_k",
    "max_reschedules",
    "priority_scheme",
    "wait_floor",
    "any_angle",
)


def planner_config_to_dict(cfg: PlannerConfig) -> dict:
    return {name: getattr(cfg, name) for name in _CONFIG_FIELDS}


def planner_config_from_dict(d: Any) -> PlannerConfig:
    unknown = set(d) - set(_CONFIG_FIELDS)
    if unknown:
        raise FormatError(f"config: unknown fields {sorted(unknown)}")
    try:
        return PlannerConfig(**d)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"config: {exc}") from exc


def solution_to_dict(solution: Solution, cfg: PlannerConfig) -> dict:
    return {
        "format": SOLUTION_FORMAT,
        "config": planner_config_to_dict(cfg),
        "metrics": {
            "flowtime": solution.flowtime,
            "makespan": solution.makespan,
            "attempts": solution.attempts,
        },
        "robots": [
            {
                "start": _config_out(traj.start),
                "primitives": [_primitive_out(p) for p in traj.primitives],
            }
            for traj in solution.trajectories
        ],
    }


def solution_from_dict(d: Any) -> tuple[Solution, PlannerConfig]:
    _check_format(d, SOLUTION_FORMAT)
    cfg = planner_config_from_dict(_require(d, "config", "solution"))
    metrics = _require(d, "metrics", "solution")
    trajectories = []
    for idx, rd in enumerate(_require(d, "robots", "solution")):
        ctx = f"solution.robots[{idx}]"
        start = _config_in(_require(rd, "start", ctx), ctx + ".start")
        prims = tuple(
            _primitive_in(pd, f"{ctx}.primitives[{k}]")
            for k, pd in enumerate(_require(rd, "primitives", ctx))
        )
        trajectories.append(Trajectory(start, prims))
    solution = Solution(
        tuple(trajectories),
        float(_require(metrics, "flowtime", "solution.metrics")),
        float(_require(metrics, "makespan", "solution.metrics")),
        int(_require(metrics, "attempts", "solution.metrics")),
    )
    return solution, cfg


# --- file I/O ---------------------------------------------------------------


def _read_payload(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc


def read_instance(path: str) -> Instance:
    return instance_from_dict(_read_payload(path))


def write_instance(path: str, instance: Instance) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(instance_to_dict(instance)))


def read_solution(path: str) -> tuple[Solution, PlannerConfig]:
    return solution_from_dict(_read_payload(path))


def write_solution(path: str, solution: Solution, cfg: PlannerConfig) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(solution_to_dict(solution, cfg)))
