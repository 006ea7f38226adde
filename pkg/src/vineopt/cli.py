"""Command-line front end: task files in, seeded runs out.

Single-run mode writes report.json, convergence.csv and scene.svg into the
output directory; batch mode writes batch.csv with one row per seed plus a
mean±sd summary row. Exit codes: 0 when the best solution is feasible, 1
when the best is infeasible, 2 for input problems, 3 for internal errors.

Everything written to files is deterministic for a given task, seed and
flags (wall-clock time appears only on stdout and in the batch runtime
column).
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import ga
from .fitness import EvaluationResult
from .geometry import CircleObstacle, Point2, Pose2, make_pose
from .model import Bounds, Task, design_of, validate_task
from .ranking import BinSizes
from .render import render_scene


class TaskFileError(ValueError):
    """Anything wrong with the task file: unreadable, bad JSON, bad schema,
    or a task that fails validation."""


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TaskFileError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TaskFileError(f"{where}: expected an integer, got {value!r}")
    return value


def _object(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise TaskFileError(f"{where}: expected an object")
    return value


def _pair(value, where: str) -> tuple[float, float]:
    if not isinstance(value, list) or len(value) != 2:
        raise TaskFileError(f"{where}: expected [lo, hi]")
    return _number(value[0], f"{where}[0]"), _number(value[1], f"{where}[1]")


def _pose(raw, where: str) -> Pose2:
    obj = _object(raw, where)
    for key in ("x", "y", "theta"):
        if key not in obj:
            raise TaskFileError(f"{where}: missing field '{key}'")
    return make_pose(
        _number(obj["x"], f"{where}.x"),
        _number(obj["y"], f"{where}.y"),
        _number(obj["theta"], f"{where}.theta"),
    )


def parse_task_file(path) -> Task:
    """Read, parse and validate a task JSON file.

    Syntax errors are reported with line and column; schema errors name the
    offending field; semantic problems carry every message from
    validate_task."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise TaskFileError(f"cannot read task file: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TaskFileError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc
    root = _object(data, str(path))
    for key in ("home", "targets", "bounds"):
        if key not in root:
            raise TaskFileError(f"{path}: missing field '{key}'")
    unit = root.get("unit", "")
    if not isinstance(unit, str):
        raise TaskFileError(f"{path}: unit: expected a string")
    home = _pose(root["home"], f"{path}: home")
    raw_targets = root["targets"]
    if not isinstance(raw_targets, list):
        raise TaskFileError(f"{path}: targets: expected a list")
    targets = tuple(
        _pose(t, f"{path}: targets[{i}]") for i, t in enumerate(raw_targets)
    )
    obstacles = []
    raw_obstacles = root.get("obstacles", [])
    if not isinstance(raw_obstacles, list):
        raise TaskFileError(f"{path}: obstacles: expected a list")
    for i, raw in enumerate(raw_obstacles):
        where = f"{path}: obstacles[{i}]"
        obj = _object(raw, where)
        for key in ("x", "y", "r"):
            if key not in obj:
                raise TaskFileError(f"{where}: missing field '{key}'")
        obstacles.append(
            CircleObstacle(
                Point2(_number(obj["x"], f"{where}.x"),
                       _number(obj["y"], f"{where}.y")),
                _number(obj["r"], f"{where}.r"),
            )
        )
    braw = _object(root["bounds"], f"{path}: bounds")
    for key in ("n_max", "theta", "length"):
        if key not in braw:
            raise TaskFileError(f"{path}: bounds: missing field '{key}'")
    free = braw.get("first_joint_free", False)
    if not isinstance(free, bool):
        raise TaskFileError(f"{path}: bounds.first_joint_free: expected a boolean")
    bounds = Bounds(
        n_max=_integer(braw["n_max"], f"{path}: bounds.n_max"),
        theta_range=_pair(braw["theta"], f"{path}: bounds.theta"),
        length_range=_pair(braw["length"], f"{path}: bounds.length"),
        first_joint_free=free,
    )
    segment_length = None
    if "segment_length" in root:
        segment_length = _number(root["segment_length"], f"{path}: segment_length")
    task = Task(
        home=home,
        targets=targets,
        obstacles=tuple(obstacles),
        bounds=bounds,
        orientation_segment_length=segment_length,
        unit=unit,
    )
    problems = validate_task(task)
    if problems:
        raise TaskFileError(f"{path}: invalid task: " + "; ".join(problems))
    return task


@dataclass
class RunReport:
    """Everything a single run reports; runtime_s stays out of report.json
    so repeated runs produce byte-identical files."""

    seed: int
    feasible: bool
    design: list[float]
    link_lengths: list[float]
    configurations: list[dict]
    objectives: dict
    violations: list[float]
    penalized_f12: float
    params: dict
    runtime_s: float


def _params_echo(params: ga.GaParams) -> dict:
    return {
        "population_size": params.population_size,
        "generations": params.generations,
        "crossover_prob": params.crossover_prob,
        "mutation_prob": params.mutation_prob,
        "alpha": params.alpha,
        "bin_f12": params.bins.bin_f12,
        "bin_f32": params.bins.bin_f32,
        "penalty": list(params.penalty),
        "avoidance": params.avoidance,
        "seed": params.seed,
        "mutation_scope": params.mutation_scope,
        "maximize_straight_links": params.maximize_straight_links,
    }


def _build_report(
    params: ga.GaParams, best: EvaluationResult, runtime_s: float
) -> RunReport:
    solution = best.solution
    assert solution.completions is not None
    configurations = [
        {
            "angles": list(row),
            "epsilon": c.epsilon,
            "theta_epsilon": c.theta_epsilon,
            "n_bar": c.n_bar,
            "last_len": c.last_len,
            "shortfall": c.shortfall,
        }
        for row, c in zip(solution.angles, solution.completions)
    ]
    o = best.objectives
    return RunReport(
        seed=params.seed,
        feasible=best.violations.is_feasible(),
        design=design_of(solution),
        link_lengths=list(solution.lengths),
        configurations=configurations,
        objectives={"f12": o.f12, "f31a": o.f31a, "f33": o.f33,
                    "f31b": o.f31b, "f32": o.f32},
        violations=list(best.violations.v),
        penalized_f12=best.penalized_f12,
        params=_params_echo(params),
        runtime_s=runtime_s,
    )


def _report_payload(report: RunReport) -> dict:
    return {
        "seed": report.seed,
        "feasible": report.feasible,
        "design": report.design,
        "link_lengths": report.link_lengths,
        "configurations": report.configurations,
        "objectives": report.objectives,
        "violations": report.violations,
        "penalized_f12": report.penalized_f12,
        "params": report.params,
    }


def _convergence_csv(history: Sequence[ga.GenerationStats]) -> str:
    lines = ["generation,f12,f31a,f33,f31b,f32,collisions_per_individual"]
    for s in history:
        o = s.best_objectives
        lines.append(
            f"{s.generation},{s.best_penalized_f12!r},{o.f31a},{o.f33!r},"
            f"{o.f31b},{o.f32!r},{s.collisions_per_individual!r}"
        )
    return "\n".join(lines) + "\n"


def run_once(task: Task, params: ga.GaParams, out_dir: Path) -> RunReport:
    """One seeded optimization; writes report.json, convergence.csv and
    scene.svg into out_dir and returns the report."""
    start = time.perf_counter()
    result = ga.run(task, params)
    runtime_s = time.perf_counter() - start
    best = result.population.evaluations[0]
    report = _build_report(params, best, runtime_s)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(
        json.dumps(_report_payload(report), indent=2) + "\n", encoding="utf-8"
    )
    (out_dir / "convergence.csv").write_text(
        _convergence_csv(result.history), encoding="utf-8"
    )
    (out_dir / "scene.svg").write_text(
        render_scene(task, best.solution, params.maximize_straight_links),
        encoding="utf-8",
    )
    return report


def _mean_sd(values: Sequence[float]) -> str:
    mean = statistics.fmean(values)
    sd = statistics.pstdev(values)
    return f"{mean:.2f}±{sd:.2f}"


def run_batch(
    task: Task, make_params, seeds: Sequence[int], out_dir: Path
) -> tuple[list[RunReport], bool]:
    """One run per seed; writes batch.csv (rows in seed order plus a
    summary row). Returns the reports and whether every best was feasible."""
    reports = []
    for seed in seeds:
        params = make_params(seed)
        start = time.perf_counter()
        result = ga.run(task, params)
        runtime_s = time.perf_counter() - start
        reports.append(_build_report(params, result.population.evaluations[0],
                                     runtime_s))
    lines = ["seed,f12,f31a,f33,f31b,f32,runtime_s"]
    for r in reports:
        o = r.objectives
        lines.append(
            f"{r.seed},{r.penalized_f12!r},{o['f31a']},{o['f33']!r},"
            f"{o['f31b']},{o['f32']!r},{r.runtime_s:.3f}"
        )
    columns = list(zip(*(
        (r.penalized_f12, r.objectives["f31a"], r.objectives["f33"],
         r.objectives["f31b"], r.objectives["f32"], r.runtime_s)
        for r in reports
    )))
    lines.append("summary," + ",".join(_mean_sd(col) for col in columns))
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "batch.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return reports, all(r.feasible for r in reports)


def parse_seed_list(text: str) -> list[int]:
    """Comma-separated seeds; 'a-b' items expand to the inclusive range."""
    seeds: list[int] = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            raise ValueError("empty item in seed list")
        if "-" in item[1:]:
            split_at = item.index("-", 1)
            lo = int(item[:split_at])
            hi = int(item[split_at + 1 :])
            if hi < lo:
                raise ValueError(f"seed range out of order: {item}")
            seeds.extend(range(lo, hi + 1))
        else:
            seeds.append(int(item))
    if not seeds:
        raise ValueError("no seeds given")
    return seeds


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vineopt",
        description="Optimize link lengths and joint counts of a planar "
        "growing manipulator against a task file.",
    )
    parser.add_argument("--task", required=True, help="task JSON file")
    parser.add_argument("--seed", type=int, default=0, help="run seed")
    parser.add_argument(
        "--seeds",
        help="batch mode: comma-separated seeds, 'a-b' ranges allowed",
    )
    parser.add_argument("--population", type=int, default=500)
    parser.add_argument("--generations", type=int, default=150)
    parser.add_argument("--bin-f12", type=float, default=1.0,
                        help="bin width for the kinematic objective")
    parser.add_argument("--bin-f32", type=float, default=5.0,
                        help="bin width for the total-length objective")
    parser.add_argument("--no-avoidance", action="store_true",
                        help="disable obstacle-aware angle generation")
    parser.add_argument("--maximize-straight-links", action="store_true",
                        help="evaluate straight growth at the upper length bound")
    parser.add_argument("--mutation-scope",
                        choices=list(ga.MUTATION_SCOPES),
                        default="configuration")
    parser.add_argument("--out-dir", default=".", help="artifact directory")
    parser.add_argument("--workers", type=int, default=1,
                        help="processes for offspring evaluation")
    return parser


def _params_for(args, seed: int) -> ga.GaParams:
    return ga.GaParams(
        population_size=args.population,
        generations=args.generations,
        bins=BinSizes(bin_f12=args.bin_f12, bin_f32=args.bin_f32),
        avoidance=not args.no_avoidance,
        seed=seed,
        mutation_scope=args.mutation_scope,
        maximize_straight_links=args.maximize_straight_links,
        workers=args.workers,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        task = parse_task_file(args.task)
    except TaskFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    seeds = None
    if args.seeds is not None:
        try:
            seeds = parse_seed_list(args.seeds)
        except ValueError as exc:
            print(f"error: invalid --seeds: {exc}", file=sys.stderr)
            return 2
    out_dir = Path(args.out_dir)
    try:
        if seeds is not None:
            reports, all_feasible = run_batch(
                task, lambda s: _params_for(args, s), seeds, out_dir
            )
            for r in reports:
                state = "feasible" if r.feasible else "INFEASIBLE best"
                print(
                    f"seed {r.seed}: {state}  f12={r.penalized_f12:.6g}  "
                    f"runtime={r.runtime_s:.2f}s"
                )
            print(f"wrote {out_dir / 'batch.csv'} ({len(reports)} seeds)")
            return 0 if all_feasible else 1
        report = run_once(task, _params_for(args, args.seed), out_dir)
        state = "feasible" if report.feasible else "INFEASIBLE best"
        o = report.objectives
        print(
            f"seed {report.seed}: {state}  f12={report.penalized_f12:.6g}  "
            f"f31a={o['f31a']}  f33={o['f33']:.4g}  f31b={o['f31b']}  "
            f"f32={o['f32']:.6g}  runtime={report.runtime_s:.2f}s"
        )
        print(f"wrote {out_dir / 'report.json'}, {out_dir / 'convergence.csv'}, "
              f"{out_dir / 'scene.svg'}")
        return 0 if report.feasible else 1
    except Exception as exc:  # pragma: no cover - defensive boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
