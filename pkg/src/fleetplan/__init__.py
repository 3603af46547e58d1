"""Continuous-time prioritized trajectory planning for disk robots on grid maps."""

from .geometry import (
    EPS,
    INF,
    MotionSegment,
    Point2,
    TimeInterval,
    circle_entry_exit_times,
    point_segment_distance,
    translating_disks_collide,
)
from .grid import (
    CellCoord,
    GridMap,
    cells_overlapping_disk,
    cells_swept_by_move,
    move_feasible_static,
)
from .prioritized import (
    Instance,
    PlanFailure,
    Solution,
    assign_priorities,
    check_instance,
    plan_all,
)
from .sipp import (
    Configuration,
    ObstacleIndex,
    PlannerConfig,
    PlanResult,
    RobotSpec,
    Rotate,
    SafeInterval,
    SearchNode,
    Trajectory,
    Translate,
    Wait,
    compute_safe_intervals,
    earliest_arrival,
    plan_single,
)
from .benchmark import InvariantViolation, run_benchmark
from .files import (
    FormatError,
    read_instance,
    read_solution,
    write_instance,
    write_solution,
)
from .generate import (
    ROBOT_TYPES,
    ROTATION_SPEED,
    GenerationError,
    generate_instances,
    generate_meta_instance,
    truncate_per_type,
)
from .robustness import (
    ExecutionRecord,
    ExecutionTrace,
    RobustnessConfig,
    augment_with_waits,
    inflate_instance,
    simulate_execution,
)
from .validate import Conflict, ConflictReport, compute_metrics, validate_solution

__all__ = [
    "EPS",
    "INF",
    "MotionSegment",
    "Point2",
    "TimeInterval",
    "circle_entry_exit_times",
    "point_segment_distance",
    "translating_disks_collide",
    "CellCoord",
    "GridMap",
    "cells_overlapping_disk",
    "cells_swept_by_move",
    "move_feasible_static",
    "Instance",
    "PlanFailure",
    "Solution",
    "assign_priorities",
    "check_instance",
    "plan_all",
    "Configuration",
    "ObstacleIndex",
    "PlannerConfig",
    "PlanResult",
    "RobotSpec",
    "Rotate",
    "SafeInterval",
    "SearchNode",
    "Trajectory",
    "Translate",
    "Wait",
    "compute_safe_intervals",
    "earliest_arrival",
    "plan_single",
    "Conflict",
    "ConflictReport",
    "compute_metrics",
    "validate_solution",
    "ExecutionRecord",
    "ExecutionTrace",
    "RobustnessConfig",
    "augment_with_waits",
    "inflate_instance",
    "simulate_execution",
    "InvariantViolation",
    "run_benchmark",
    "FormatError",
    "read_instance",
    "read_solution",
    "write_instance",
    "write_solution",
    "ROBOT_TYPES",
    "ROTATION_SPEED",
    "GenerationError",
    "generate_instances",
    "generate_meta_instance",
    "truncate_per_type",
]
