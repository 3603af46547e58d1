"""Command-line front-end.

Verbs: plan, validate, simulate, generate, benchmark. Flags mirror the
config dataclass field names. Exit codes: 0 success, 1 planned failure or
conflicts found, 2 usage or format error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import os
import sys

from .benchmark import InvariantViolation, run_benchmark
from .files import (
    REPORT_FORMAT,
    FormatError,
    dumps_canonical,
    planner_config_to_dict,
    read_instance,
    read_solution,
    write_instance,
    write_solution,
)
from .generate import GenerationError, generate_instances
from .prioritized import PlanFailure, check_instance, plan_all
from .robustness import RobustnessConfig, simulate_execution
from .sipp import PlannerConfig
from .validate import Conflict, validate_solution

EXIT_OK = 0
EXIT_NO_SOLUTION = 1  # planned failure, or conflicts found
EXIT_USAGE = 2
EXIT_INVARIANT = 3


def _add_planner_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--delta", type=float, default=0.1, help="wait quantum")
    p.add_argument("--ssi-duration", type=float, default=3.0,
                   help="how long unplanned robots' start cells stay reserved")
    p.add_argument("--timeout", type=float, default=60.0, help="wall-clock budget, seconds")
    p.add_argument("--neighborhood-k", type=int, default=2,
                   help="neighborhood refinement level: 1=4, 2=8, 3=16, 4=32 moves")
    p.add_argument("--max-reschedules", type=int, default=None,
                   help="priority promotions before giving up (default: robot count)")
    p.add_argument("--priority-scheme", choices=["distance_ascending", "as_given"],
                   default="distance_ascending")
    p.add_argument("--wait-floor", type=float, default=0.0,
                   help="minimum wait inserted before every translation")
    p.add_argument("--any-angle", action=argparse.BooleanOptionalAction, default=True,
                   help="allow shortcutting moves to any visible cell")


def _planner_config(args: argparse.Namespace) -> PlannerConfig:
    return PlannerConfig(
        delta=args.delta,
        ssi_duration=args.ssi_duration,
        timeout=args.timeout,
        neighborhood_k=args.neighborhood_k,
        max_reschedules=args.max_reschedules,
        priority_scheme=args.priority_scheme,
        wait_floor=args.wait_floor,
        any_angle=args.any_angle,
    )


def _add_delay_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--inflation", type=float, default=0.0,
                   help="extra radius added to every robot at planning time")
    p.add_argument("--delay-model", choices=["none", "uniform", "fixed"], default="none")
    p.add_argument("--delay", type=float, default=0.0,
                   help="delay bound (uniform) or value (fixed), per translation")
    p.add_argument("--seed", type=int, default=0)


def _conflict_out(c: Conflict) -> dict:
    return {
        "kind": c.kind,
        "robots": list(c.robots),
        "time": c.time,
        "separation": c.separation,
        "required": c.required,
        "detail": c.detail,
    }


def _emit(payload: dict, out: str | None) -> None:
    text = dumps_canonical(payload)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_checked_instance(path: str):
    instance = read_instance(path)
    problems = check_instance(instance)
    if problems:
        raise FormatError(f"{path}: invalid instance: {problems[0]}")
    return instance


def _cmd_plan(args: argparse.Namespace) -> int:
    instance = _load_checked_instance(args.instance)
    cfg = _planner_config(args)
    result = plan_all(instance, cfg)
    if isinstance(result, PlanFailure):
        _emit(
            {
                "format": REPORT_FORMAT,
                "kind": "plan_failure",
                "reason": result.reason,
                "robot": result.robot,
                "attempts": result.attempts,
            },
            args.out,
        )
        print(f"no solution: {result.reason} (robot {result.robot})", file=sys.stderr)
        return EXIT_NO_SOLUTION
    if args.out is None:
        from .files import solution_to_dict

        _emit(solution_to_dict(result, cfg), None)
    else:
        write_solution(args.out, result, cfg)
    print(
        f"solved: flowtime {result.flowtime:.6g}, makespan {result.makespan:.6g}, "
        f"attempts {result.attempts}",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    instance = _load_checked_instance(args.instance)
    solution, _ = read_solution(args.solution)
    report = validate_solution(
        solution,
        instance,
        mode=args.mode,
        dt=args.dt,
        strict_timing=args.strict_timing,
    )
    _emit(
        {
            "format": REPORT_FORMAT,
            "kind": "validation",
            "mode": report.mode,
            "certified": report.certified,
            "conflicts": [_conflict_out(c) for c in report.conflicts],
        },
        args.out,
    )
    return EXIT_OK if report.certified else EXIT_NO_SOLUTION


def _cmd_simulate(args: argparse.Namespace) -> int:
    instance = _load_checked_instance(args.instance)
    solution, _ = read_solution(args.solution)
    rcfg = RobustnessConfig(
        inflation=args.inflation,
        wait_floor=args.wait_floor,
        delay_model=args.delay_model,
        delay=args.delay,
    )
    trace, report = simulate_execution(solution, instance, rcfg, args.seed)
    robots = [
        {
            "arrival_planned": planned.arrival_time,
            "arrival_realized": realized.arrival_time,
            "final_lateness": records[-1].lateness if records else 0.0,
        }
        for planned, realized, records in zip(
            solution.trajectories, trace.realized.trajectories, trace.records
        )
    ]
    _emit(
        {
            "format": REPORT_FORMAT,
            "kind": "simulation",
            "seed": args.seed,
            "wait_floor": args.wait_floor,
            "delay_model": args.delay_model,
            "delay": args.delay,
            "certified": report.certified,
            "conflicts": [_conflict_out(c) for c in report.conflicts],
            "robots": robots,
        },
        args.out,
    )
    return EXIT_OK if report.certified else EXIT_NO_SOLUTION


def _cmd_generate(args: argparse.Namespace) -> int:
    instances = generate_instances(
        args.count,
        args.width,
        args.height,
        args.robots_per_type,
        args.seed,
        obstacles=args.obstacles,
        obstacle_shape=(args.obstacle_width, args.obstacle_height),
    )
    os.makedirs(args.out_dir, exist_ok=True)
    names = []
    for k, instance in enumerate(instances):
        name = f"instance_{k:04d}.instance.json"
        write_instance(os.path.join(args.out_dir, name), instance)
        names.append(name)
    _emit(
        {
            "format": REPORT_FORMAT,
            "kind": "generation",
            "seed": args.seed,
            "count": len(names),
            "files": names,
        },
        None,
    )
    return EXIT_OK


def _cmd_benchmark(args: argparse.Namespace) -> int:
    instances = [_load_checked_instance(path) for path in args.instances]
    cfg = _planner_config(args)
    robustness = None
    if args.robustness:
        robustness = RobustnessConfig(
            inflation=args.inflation,
            wait_floor=args.wait_floor,
            delay_model=args.delay_model,
            delay=args.delay,
        )
    report = run_benchmark(
        instances,
        cfg,
        robustness=robustness,
        executions=args.executions,
        out_dir=args.out_dir,
        seed=args.seed,
        workers=args.workers,
    )
    _emit(report, args.report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fleetplan",
        description="Continuous-time prioritized trajectory planning for disk robots",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("plan", help="plan one instance")
    p.add_argument("instance", help="instance file")
    p.add_argument("--out", default=None, help="solution file (default: stdout)")
    _add_planner_flags(p)
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("validate", help="check a solution against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--mode", choices=["analytic", "sampled"], default="analytic")
    p.add_argument("--dt", type=float, default=1e-3, help="sampling step for sampled mode")
    p.add_argument("--strict-timing", action=argparse.BooleanOptionalAction, default=True,
                   help="enforce speed and duration laws, not just collisions")
    p.add_argument("--out", default=None, help="report file (default: stdout)")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("simulate", help="execute a solution under random delays")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--wait-floor", type=float, default=0.0,
                   help="per-translation wait the plan was built with")
    _add_delay_flags(p)
    p.add_argument("--out", default=None, help="report file (default: stdout)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("generate", help="write random instance files")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--height", type=int, default=64)
    p.add_argument("--robots-per-type", type=int, default=5)
    p.add_argument("--obstacles", type=int, default=0)
    p.add_argument("--obstacle-width", type=int, default=20)
    p.add_argument("--obstacle-height", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("benchmark", help="plan, validate, and aggregate many instances")
    p.add_argument("instances", nargs="+", help="instance files")
    _add_planner_flags(p)
    p.add_argument("--robustness", action="store_true",
                   help="plan with inflation and wait floor, then simulate executions")
    _add_delay_flags(p)
    p.add_argument("--executions", type=int, default=5,
                   help="simulated executions per solved instance (with --robustness)")
    p.add_argument("--out-dir", default=None, help="directory for solution files")
    p.add_argument("--report", default=None, help="report file (default: stdout)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_benchmark)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GenerationError as exc:
        print(f"generation error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"file not found: {exc.filename}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"invalid value: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
