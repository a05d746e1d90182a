"""Command-line entry point and seeded benchmark harness.

Subcommands: ``solve`` (one annealing run), ``validate`` (certify a solution
file), ``bench`` (seeded replications over an instance set with CSV output and
avg/best/%feasible aggregation) and ``preprocess-dump`` (inspect derived
matrices).  Exit codes: 0 ok/feasible, 1 infeasible solve, 2 usage error,
3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .annealer import (
    DEFAULT_ITERATIONS,
    PRESETS,
    RunResult,
    SAParams,
    SolverVariant,
    run,
    samples_per_level,
    temperature_levels,
)
from .evaluation import CostBreakdown
from .instance_io import (
    InstanceFormat,
    ParseError,
    load_instance,
    write_solution,
)
from .model import Formulation, Instance
from .preprocess import PreprocessedInstance, preprocess
from .validator import ViolationReport, validate, validate_file

CSV_HEADER = "instance,family,variant,seed,iterations,distance,objective,feasible,wall_ms"
TRACE_HEADER = "level,temperature,current_f,best_distance,best_objective"

# default file format and formulation per family preset
FAMILY_IO: dict[str, tuple[InstanceFormat, Formulation]] = {
    "itc2007": (InstanceFormat.WITH_AVAILABILITY, Formulation.FULL),
    "itc2002": (InstanceFormat.PLAIN, Formulation.ORIGINAL),
    "metaheuristics-network": (InstanceFormat.PLAIN, Formulation.ORIGINAL),
    "lewis-med": (InstanceFormat.PLAIN, Formulation.HARD_ONLY),
    "lewis-big": (InstanceFormat.PLAIN, Formulation.HARD_ONLY),
}


@dataclass
class RunRecord:
    """One seeded replication; ``feasible`` comes from re-certifying the
    emitted solution with the validator, never from the solver itself."""

    instance: str
    family: str
    variant: str
    seed: int
    iterations: int
    distance: int
    objective: int
    feasible: bool
    wall_ms: int
    breakdown: CostBreakdown | None = None
    error: str | None = None

    def csv_row(self) -> str:
        return (
            f"{self.instance},{self.family},{self.variant},{self.seed},"
            f"{self.iterations},{self.distance},{self.objective},"
            f"{int(self.feasible)},{self.wall_ms}"
        )


@dataclass
class AggregateRow:
    """Per-instance aggregate in the avg / %feasible / best style.

    Averages include infeasible runs (their objective values are of limited
    meaning, which is why the average distance is reported alongside).
    """

    instance: str
    runs: int
    avg_objective: float
    best_objective: int | None  # among feasible runs
    pct_feasible: float
    avg_distance: float

    def format_row(self) -> str:
        best = str(self.best_objective) if self.best_objective is not None else "-"
        return (
            f"{self.instance:24s} {self.runs:4d} {self.avg_objective:10.2f} "
            f"{best:>8s} {self.pct_feasible:7.1f} {self.avg_distance:10.2f}"
        )


def aggregate(records: list[RunRecord]) -> list[AggregateRow]:
    by_instance: dict[str, list[RunRecord]] = {}
    for rec in records:
        by_instance.setdefault(rec.instance, []).append(rec)
    rows = []
    for name in sorted(by_instance):
        recs = [r for r in by_instance[name] if r.error is None]
        if not recs:
            rows.append(AggregateRow(name, 0, 0.0, None, 0.0, 0.0))
            continue
        feas = [r for r in recs if r.feasible]
        rows.append(
            AggregateRow(
                instance=name,
                runs=len(recs),
                avg_objective=statistics.fmean(r.objective for r in recs),
                best_objective=min((r.objective for r in feas), default=None),
                pct_feasible=100.0 * len(feas) / len(recs),
                avg_distance=statistics.fmean(r.distance for r in recs),
            )
        )
    return rows


def _certify(inst: Instance, result: RunResult) -> ViolationReport:
    return validate(inst, result.best_assignment)


def _reported(inst: Instance, report: ViolationReport) -> tuple[int, int]:
    return report.score()


def _single_run(
    name: str,
    family: str,
    inst: Instance,
    pre: PreprocessedInstance,
    variant: SolverVariant,
    params: SAParams,
    outdir: Path | None,
) -> RunRecord:
    start = time.perf_counter()
    try:
        result = run(pre, variant, params)
        report = _certify(inst, result)
        distance, objective = _reported(inst, report)
        if outdir is not None:
            outdir.mkdir(parents=True, exist_ok=True)
            path = outdir / f"{name}-s{params.seed}.sln"
            path.write_text(write_solution(result.best_assignment))
        wall_ms = int(1000 * (time.perf_counter() - start))
        return RunRecord(
            instance=name,
            family=family,
            variant=variant.value,
            seed=params.seed,
            iterations=result.iterations,
            distance=distance,
            objective=objective,
            feasible=report.feasible,
            wall_ms=wall_ms,
            breakdown=CostBreakdown(
                report.distance_to_feasibility,
                report.totals["H1"],
                report.totals["H5"],
                report.soft_late,
                report.soft_consecutive,
                report.soft_isolated,
            ),
        )
    except Exception as exc:  # solver stall or internal failure: keep the row
        wall_ms = int(1000 * (time.perf_counter() - start))
        return RunRecord(
            instance=name,
            family=family,
            variant=variant.value,
            seed=params.seed,
            iterations=0,
            distance=-1,
            objective=-1,
            feasible=False,
            wall_ms=wall_ms,
            error=str(exc),
        )


@dataclass
class BenchEntry:
    path: Path
    family: str
    formulation: Formulation


def read_manifest(path: Path) -> list[BenchEntry]:
    """Plain-text benchmark set: ``path family [formulation]`` per line."""
    entries = []
    base = path.parent
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"{path}:{lineno}: expected 'path family [formulation]'")
        family = parts[1]
        if family not in PRESETS:
            raise ParseError(
                f"{path}:{lineno}: unknown family {family!r} "
                f"(choose from {', '.join(sorted(PRESETS))})"
            )
        formulation = (
            Formulation(parts[2]) if len(parts) == 3 else FAMILY_IO[family][1]
        )
        p = Path(parts[0])
        entries.append(BenchEntry(p if p.is_absolute() else base / p, family, formulation))
    return entries


def run_benchmark(
    entries: list[BenchEntry],
    runs: int,
    jobs: int = 1,
    seed_base: int = 0,
    iterations: int | None = None,
    outdir: Path | None = None,
    params_overrides: dict | None = None,
) -> tuple[list[RunRecord], list[AggregateRow]]:
    """Replications ``seed_base + i`` for every instance of the set.

    Each worker owns its search state; instances and their preprocessing are
    shared read-only.  Record order is (entry, seed), independent of thread
    scheduling, so repeated runs emit byte-identical CSVs apart from wall
    times.
    """
    tasks = []
    for entry in entries:
        fmt = FAMILY_IO[entry.family][0]
        preset = PRESETS[entry.family]
        overrides = dict(params_overrides or {})
        if iterations is not None:
            overrides["iterations"] = iterations
        try:
            inst = load_instance(entry.path, fmt, entry.formulation)
            pre = preprocess(inst)
        except (ParseError, OSError, ValueError) as exc:
            print(f"error: skipping {entry.path}: {exc}", file=sys.stderr)
            tasks.append((entry.path.stem, entry.family, None, None, None, str(exc)))
            continue
        for i in range(runs):
            params = preset.params(seed=seed_base + i, **overrides)
            tasks.append((entry.path.stem, entry.family, inst, pre, params, None))

    records: list[RunRecord | None] = [None] * len(tasks)

    def exec_task(idx: int) -> None:
        name, family, inst, pre, params, err = tasks[idx]
        if err is not None:
            records[idx] = RunRecord(
                instance=name,
                family=family,
                variant="-",
                seed=-1,
                iterations=0,
                distance=-1,
                objective=-1,
                feasible=False,
                wall_ms=0,
                error=err,
            )
            return
        variant = PRESETS[family].variant
        records[idx] = _single_run(name, family, inst, pre, variant, params, outdir)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(exec_task, range(len(tasks))))
    else:
        for idx in range(len(tasks)):
            exec_task(idx)
    done = [r for r in records if r is not None]
    return done, aggregate(done)


def write_csv(records: list[RunRecord], path: Path) -> None:
    lines = [CSV_HEADER] + [r.csv_row() for r in records]
    path.write_text("\n".join(lines) + "\n")


def _write_trace(result: RunResult, path: Path) -> None:
    lines = [TRACE_HEADER]
    for level, row in enumerate(result.trace):
        lines.append(
            f"{level},{row[0]!r},{int(row[1])},{int(row[2])},{int(row[3])}"
        )
    path.write_text("\n".join(lines) + "\n")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=sorted(PRESETS), help="family preset for variant/t0/rho")
    p.add_argument("--variant", choices=[v.value for v in SolverVariant])
    p.add_argument("--t0", type=float, help="start temperature")
    p.add_argument("--rho", type=float, help="ratio T0 / T_min")
    p.add_argument("--beta", type=float, default=0.9999, help="cooling rate")
    p.add_argument("--iterations", type=int, default=DEFAULT_ITERATIONS)
    p.add_argument("--sr", type=float, default=0.4, help="swap-move probability")
    p.add_argument("--weight", type=int, default=1, help="hard-constraint weight W")
    p.add_argument("--endgame-fraction", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)


def _resolve_solver(args) -> tuple[SolverVariant, SAParams]:
    t0, rho, variant = args.t0, args.rho, args.variant
    if args.preset:
        preset = PRESETS[args.preset]
        t0 = t0 if t0 is not None else preset.t0
        rho = rho if rho is not None else preset.rho
        variant = variant if variant is not None else preset.variant.value
    if t0 is None or rho is None:
        raise ValueError("t0 and rho are required (directly or via --preset)")
    if variant is None:
        raise ValueError("variant is required (directly or via --preset)")
    params = SAParams(
        t0=t0,
        rho=rho,
        beta=args.beta,
        iterations=args.iterations,
        sr=args.sr,
        w=args.weight,
        endgame_fraction=args.endgame_fraction,
        seed=args.seed,
    )
    return SolverVariant(variant), params


def _io_choices(args) -> tuple[InstanceFormat, Formulation]:
    fmt = InstanceFormat(args.format) if args.format else None
    formulation = Formulation(args.formulation) if args.formulation else None
    if args.preset:
        d_fmt, d_form = FAMILY_IO[args.preset]
        fmt = fmt or d_fmt
        formulation = formulation or d_form
    if fmt is None or formulation is None:
        raise ValueError("format and formulation are required (directly or via --preset)")
    return fmt, formulation


def _cmd_solve(args) -> int:
    variant, params = _resolve_solver(args)
    fmt, formulation = _io_choices(args)
    inst = load_instance(args.instance, fmt, formulation)
    pre = preprocess(inst)
    result = run(pre, variant, params)
    report = _certify(inst, result)
    primary, secondary = report.score()
    print(f"instance            {inst.name}")
    print(f"variant             {variant.value}")
    print(f"levels x samples    {temperature_levels(params)} x {samples_per_level(params)}")
    print(f"iterations          {result.iterations}")
    print(f"stalls              {result.stalls}")
    for key, value in report.summary().items():
        print(f"{key:20s}{value}")
    print(f"score               ({primary}, {secondary})")
    if args.out:
        Path(args.out).write_text(write_solution(result.best_assignment))
        print(f"solution written to {args.out}")
    if args.trace:
        _write_trace(result, Path(args.trace))
    return 0 if report.feasible else 1


def _cmd_validate(args) -> int:
    fmt = InstanceFormat(args.format)
    formulation = Formulation(args.formulation)
    report = validate_file(args.instance, args.solution, fmt, formulation)
    shown = 0
    for v in report.violations:
        if shown >= args.max_shown:
            print(f"... ({len(report.violations) - shown} more violations)")
            break
        print(f"violation {v.tag} ids={','.join(map(str, v.ids))} cost={v.cost}")
        shown += 1
    for key, value in report.summary().items():
        print(f"{key:20s}{value}")
    primary, secondary = report.score()
    print(f"score               ({primary}, {secondary})")
    return 0 if report.feasible else 1


def _cmd_bench(args) -> int:
    if args.manifest:
        entries = read_manifest(Path(args.manifest))
    else:
        if not args.family:
            raise ValueError("--family is required when benchmarking a directory")
        directory = Path(args.dir)
        files = sorted(directory.glob("*.tim")) or sorted(directory.glob("*"))
        formulation = (
            Formulation(args.formulation)
            if args.formulation
            else FAMILY_IO[args.family][1]
        )
        entries = [BenchEntry(f, args.family, formulation) for f in files if f.is_file()]
    if not entries:
        raise ValueError("no instances to benchmark")
    overrides = {}
    if args.endgame_fraction is not None:
        overrides["endgame_fraction"] = args.endgame_fraction
    records, rows = run_benchmark(
        entries,
        runs=args.runs,
        jobs=args.jobs,
        seed_base=args.seed,
        iterations=args.iterations,
        outdir=Path(args.outdir) if args.outdir else None,
        params_overrides=overrides,
    )
    write_csv(records, Path(args.csv))
    print(f"{'instance':24s} {'runs':>4s} {'avg obj':>10s} {'best':>8s} {'%feas':>7s} {'avg dist':>10s}")
    for row in rows:
        print(row.format_row())
    print(f"csv written to {args.csv}")
    return 0


def _cmd_preprocess_dump(args) -> int:
    fmt, formulation = _io_choices(args)
    inst = load_instance(args.instance, fmt, formulation)
    pre = preprocess(inst)
    E = inst.num_events
    print(f"events {E} rooms {inst.num_rooms} timeslots {inst.num_timeslots}")
    print("room order (ascending attractiveness):", " ".join(map(str, pre.room_order)))
    print("all-room events:", " ".join(map(str, sorted(pre.all_room_events))) or "-")
    print(
        "one-room events:",
        " ".join(f"{e}->{r}" for e, r in sorted(pre.one_room_events.items())) or "-",
    )
    print("event-room compatibility:")
    for e in range(E):
        print(f"  {e + 1}: " + "".join("1" if x else "0" for x in pre.theta_r[e]))
    print("event-event conflicts:")
    for e in range(E):
        print(f"  {e + 1}: " + "".join("1" if x else "0" for x in pre.theta_e[e]))
    print("timeslot windows:")
    for e, (lo, hi) in enumerate(pre.slot_window, start=1):
        window = f"[{lo}, {hi}]" if lo <= hi else "empty"
        print(f"  {e}: {window}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pectt",
        description="Post-enrolment course timetabling: solver, validator, benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the annealer on one instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--format", choices=[f.value for f in InstanceFormat])
    p.add_argument("--formulation", choices=[f.value for f in Formulation])
    _add_solver_flags(p)
    p.add_argument("--out", help="solution file to write")
    p.add_argument("--trace", help="per-level trace CSV to write")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("validate", help="certify a solution file")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--format", required=True, choices=[f.value for f in InstanceFormat])
    p.add_argument("--formulation", required=True, choices=[f.value for f in Formulation])
    p.add_argument("--max-shown", type=int, default=20)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("bench", help="seeded replications over an instance set")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--manifest", help="text file: path family [formulation] per line")
    group.add_argument("--dir", help="directory of instance files")
    p.add_argument("--family", choices=sorted(PRESETS), help="family for --dir mode")
    p.add_argument("--formulation", choices=[f.value for f in Formulation])
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="base seed; run i uses seed+i")
    p.add_argument("--iterations", type=int, default=None)
    p.add_argument("--endgame-fraction", type=float, default=None)
    p.add_argument("--csv", default="bench.csv")
    p.add_argument("--outdir", default=None, help="directory for solution files")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("preprocess-dump", help="emit derived matrices and windows")
    p.add_argument("--instance", required=True)
    p.add_argument("--format", choices=[f.value for f in InstanceFormat])
    p.add_argument("--formulation", choices=[f.value for f in Formulation])
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.set_defaults(func=_cmd_preprocess_dump)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            print(f"error: {exc}", file=sys.stderr)
            return 3
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
