"""Execution robustness: radius inflation, wait augmentation, and a
delay-injecting execution simulator.

Plans assume perfect execution. Real robots run late, so two plan-time
margins are provided: growing every radius by a fixed amount (spatial
slack) and forcing a wait of duration d before every translation
(temporal slack). The simulator here perturbs a plan's timing with random
per-translation delays, lets each robot burn its pre-translation waits to
catch up, and hands the realized motion to the independent validator to
see whether the margins actually absorbed the disturbance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .prioritized import Instance, PlanFailure, Solution, plan_all
from .sipp import PlannerConfig, Trajectory, Translate, Wait
from .validate import ConflictReport, validate_solution

_DELAY_MODELS = ("none", "uniform", "fixed")


@dataclass(frozen=True)
class RobustnessConfig:
    """Margins bought at plan time plus the disturbance model applied at run time.

    inflation    extra radius added to every robot when planning
    wait_floor   minimum wait inserted before every translation when planning
    delay_model  "none", "uniform" (delay drawn from U(0, delay)) or "fixed"
    delay        model parameter: upper bound for "uniform", exact value for "fixed"
    """

    inflation: float = 0.0
    wait_floor: float = 0.0
    delay_model: str = "none"
    delay: float = 0.0

    def __post_init__(self) -> None:
        if self.inflation < 0:
            raise ValueError("inflation must be non-negative")
        if self.wait_floor < 0:
            raise ValueError("wait_floor must be non-negative")
        if self.delay < 0:
            raise ValueError("delay must be non-negative")
        if self.delay_model not in _DELAY_MODELS:
            raise ValueError(f"unknown delay model: {self.delay_model!r}")


@dataclass(frozen=True)
class ExecutionRecord:
    """Outcome of one executed primitive."""

    kind: str  # "wait" | "rotate" | "translate"
    planned_end: float
    realized_end: float
    lateness: float  # cumulative uncompensated lateness after this primitive

    def __post_init__(self) -> None:
        if self.lateness < 0:
            raise ValueError("lateness must be non-negative")


@dataclass(frozen=True)
class ExecutionTrace:
    """Per-robot realized timelines produced by simulate_execution."""

    records: tuple[tuple[ExecutionRecord, ...], ...]  # ordered by robot index
    realized: Solution  # the plan with execution timing substituted


def inflate_instance(instance: Instance, inflation: float) -> Instance:
    """Copy the instance with every robot radius grown by ``inflation``.

    Planning against the inflated instance buys clearance everywhere, so a
    plan that is valid for the grown disks is valid for the true ones.
    """
    if inflation < 0:
        raise ValueError("inflation must be non-negative")
    robots = tuple(replace(r, radius=r.radius + inflation) for r in instance.robots)
    return Instance(instance.grid, robots)


def augment_with_waits(
    instance: Instance, d: float, cfg: PlannerConfig | None = None
) -> Solution | PlanFailure:
    """Plan the instance with a mandatory wait of duration ``d`` before every
    translation.

    The waits are produced by the planner itself, so they are collision-checked
    as stationary presence like any other wait; that is what lets a robot later
    consume them to recover from delays without invalidating the plan.
    """
    if d < 0:
        raise ValueError("wait duration must be non-negative")
    base = cfg if cfg is not None else PlannerConfig()
    return plan_all(instance, replace(base, wait_floor=d))


def _draw_delay(cfg: RobustnessConfig, rng: random.Random) -> float:
    if cfg.delay_model == "uniform":
        return rng.uniform(0.0, cfg.delay)
    if cfg.delay_model == "fixed":
        return cfg.delay
    return 0.0


def simulate_execution(
    solution: Solution, instance: Instance, cfg: RobustnessConfig, seed: int
) -> tuple[ExecutionTrace, ConflictReport]:
    """Execute a plan under random per-translation delays and validate the result.

    Each robot runs its primitives in order on its own clock. Rotations execute
    nominally. Every translation finishes late by a delay drawn from
    cfg.delay_model, which accumulates as lateness. Each planned wait is
    shortened to discharge lateness, by at most min(lateness, wait_floor, wait
    duration), so a robot never moves earlier than planned and never recovers
    more than the wait floor per wait. The geometry is followed exactly; only
    timing shifts.

    The realized motion is checked by the validator in sampled mode with the
    timing laws relaxed (a delayed translation is slower than the nominal
    speed), against the radii in ``instance``. Pass the true, uninflated
    instance to test whether plan-time margins covered the disturbance.
    Deterministic for a fixed seed: delays are drawn from one stream in robot
    index order, then primitive order.
    """
    rng = random.Random(seed)
    all_records: list[tuple[ExecutionRecord, ...]] = []
    realized_trajs: list[Trajectory] = []
    for traj in solution.trajectories:
        cursor = 0.0  # realized end of the previous primitive
        lateness = 0.0
        records: list[ExecutionRecord] = []
        primitives = []
        for prim in traj.primitives:
            if isinstance(prim, Wait):
                kind = "wait"
                lateness -= min(lateness, cfg.wait_floor, prim.duration)
            elif isinstance(prim, Translate):
                kind = "translate"
                lateness += _draw_delay(cfg, rng)
            else:
                kind = "rotate"
            # realized time runs behind plan by exactly the current lateness
            end = prim.t_end + lateness
            if end - cursor > 1e-12 or kind != "wait":
                primitives.append(replace(prim, t_start=cursor, t_end=end))
            records.append(ExecutionRecord(kind, prim.t_end, end, lateness))
            cursor = end
        realized_trajs.append(Trajectory(traj.start, tuple(primitives)))
        all_records.append(tuple(records))
    trajs = tuple(realized_trajs)
    arrivals = [t.arrival_time for t in trajs]
    realized_solution = Solution(
        trajs,
        sum(arrivals),
        max(arrivals, default=0.0),
        solution.attempts,
        solution.elapsed,
    )
    report = validate_solution(
        realized_solution, instance, mode="sampled", strict_timing=False
    )
    return ExecutionTrace(tuple(all_records), realized_solution), report
