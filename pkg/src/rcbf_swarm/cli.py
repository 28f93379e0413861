"""Command-line runner: validate scenarios, execute runs, write CSV logs.

Exit codes: 0 success, 2 invalid scenario, 3 solver failure, 4 I/O failure.
Output files carry no timestamps and floats are serialized with 17
significant digits, so repeated runs of the same command are byte-identical.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .barrier import InfeasibleSafetyMarginError
from .core import ScenarioConfig, apply_overrides, dump_scenario, load_scenario, validate_scenario
from .engine import TrajectoryLog, run
from .qp import QpError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_SOLVER = 3
EXIT_IO = 4

OUT_ENV = "RCBF_SWARM_OUT"


@dataclass(frozen=True)
class RunReport:
    scenario: str
    mode: str
    interceptions: int
    collisions: int
    min_separation: float
    first_collision_time: float | None
    filter_activations: int
    slack_total: float
    wall_clock: float

    @staticmethod
    def from_log(scenario: str, mode: str, log: TrajectoryLog, wall_clock: float) -> "RunReport":
        out = log.outcome
        assert out is not None
        return RunReport(
            scenario=scenario,
            mode=mode,
            interceptions=out.interceptions,
            collisions=out.collisions,
            min_separation=out.min_effector_separation,
            first_collision_time=out.first_collision_time,
            filter_activations=out.filter_activations,
            slack_total=out.slack_total,
            wall_clock=wall_clock,
        )


def _fmt(x: float) -> str:
    return format(x, ".17g")


def write_run_outputs(log: TrajectoryLog, cfg: ScenarioConfig, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = [
        "t,agent_id,role,px,py,pz,vx,vy,vz,anom_x,anom_y,anom_z,a_x,a_y,a_z,"
        "n_active_constraints,slack_total,saturated"
    ]
    for t, records in log.steps:
        ts = _fmt(t)
        for agent_id in log.agent_ids:
            r = records[agent_id]
            lines.append(
                f"{ts},{agent_id},{log.roles[agent_id]},"
                f"{_fmt(r.position[0])},{_fmt(r.position[1])},{_fmt(r.position[2])},"
                f"{_fmt(r.velocity[0])},{_fmt(r.velocity[1])},{_fmt(r.velocity[2])},"
                f"{_fmt(r.nominal[0])},{_fmt(r.nominal[1])},{_fmt(r.nominal[2])},"
                f"{_fmt(r.applied[0])},{_fmt(r.applied[1])},{_fmt(r.applied[2])},"
                f"{r.n_active_constraints},{_fmt(r.slack_total)},{int(r.saturated)}"
            )
    (out_dir / "trajectory.csv").write_text("\n".join(lines) + "\n")

    ev_lines = ["t,kind,agent_a,agent_b,detail"]
    for ev in log.events:
        a = ev.agents[0] if ev.agents else ""
        b = ev.agents[1] if len(ev.agents) > 1 else ""
        detail = ev.detail.replace(",", ";")
        ev_lines.append(f"{_fmt(ev.time)},{ev.kind},{a},{b},{detail}")
    (out_dir / "events.csv").write_text("\n".join(ev_lines) + "\n")

    (out_dir / "config.yaml").write_text(dump_scenario(cfg))


def print_report(report: RunReport) -> None:
    first = "none" if report.first_collision_time is None else f"{report.first_collision_time:.3f} s"
    print(f"scenario={report.scenario} mode={report.mode}")
    print(f"  interceptions        : {report.interceptions}")
    print(f"  collisions           : {report.collisions}")
    print(f"  min separation       : {report.min_separation:.6g} m")
    print(f"  first collision      : {first}")
    print(f"  filter activations   : {report.filter_activations}")
    print(f"  total slack          : {report.slack_total:.6g}")
    print(f"  wall clock           : {report.wall_clock:.2f} s")


def print_comparison(baseline: RunReport, filtered: RunReport) -> None:
    def first(r: RunReport) -> str:
        return "none" if r.first_collision_time is None else f"{r.first_collision_time:.3f}"

    rows = [
        ("metric", "baseline", "filtered"),
        ("interceptions", str(baseline.interceptions), str(filtered.interceptions)),
        ("collisions", str(baseline.collisions), str(filtered.collisions)),
        ("min separation [m]", f"{baseline.min_separation:.6g}", f"{filtered.min_separation:.6g}"),
        ("first collision [s]", first(baseline), first(filtered)),
        ("filter activations", str(baseline.filter_activations), str(filtered.filter_activations)),
        ("total slack", f"{baseline.slack_total:.6g}", f"{filtered.slack_total:.6g}"),
        ("wall clock [s]", f"{baseline.wall_clock:.2f}", f"{filtered.wall_clock:.2f}"),
    ]
    widths = [max(len(row[col]) for row in rows) for col in range(3)]
    print(f"scenario={baseline.scenario}")
    for row in rows:
        print("  " + "  ".join(cell.ljust(widths[col]) for col, cell in enumerate(row)))


def _load_and_prepare(args: argparse.Namespace) -> ScenarioConfig:
    cfg = load_scenario(args.scenario)
    overrides = list(args.override or [])
    if overrides:
        cfg = apply_overrides(cfg, overrides)
    return cfg


def _default_out(cfg_name: str) -> Path:
    return Path(os.environ.get(OUT_ENV, "runs")) / cfg_name


def _execute(cfg: ScenarioConfig, mode: str, out_dir: Path | None) -> RunReport:
    started = time.perf_counter()
    log = run(cfg)
    elapsed = time.perf_counter() - started
    report = RunReport.from_log(cfg.name, mode, log, elapsed)
    if out_dir is not None:
        write_run_outputs(log, cfg, out_dir)
    return report


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="rcbf-swarm",
        description="Safety-filtered interception scenario runner",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="check a scenario file for admissibility")
    p_val.add_argument("scenario")
    p_val.add_argument("--override", action="append", metavar="KEY=VALUE")

    p_run = sub.add_parser("run", help="execute one scenario and write logs")
    p_run.add_argument("scenario")
    p_run.add_argument("--filter", choices=("on", "off"), default=None)
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--override", action="append", metavar="KEY=VALUE")

    p_cmp = sub.add_parser("compare", help="run baseline and filtered modes side by side")
    p_cmp.add_argument("scenario")
    p_cmp.add_argument("--out", default=None)
    p_cmp.add_argument("--override", action="append", metavar="KEY=VALUE")

    args = parser.parse_args(argv)

    try:
        cfg = _load_and_prepare(args)
    except (OSError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    problems = validate_scenario(cfg)
    if args.command == "validate":
        if problems:
            for item in problems:
                print(item)
            return EXIT_INVALID
        print(f"scenario {cfg.name!r} is valid")
        return EXIT_OK
    if problems:
        for item in problems:
            print(item, file=sys.stderr)
        return EXIT_INVALID

    try:
        if args.command == "run":
            if args.filter is not None:
                cfg = apply_overrides(cfg, [f"sim.filter_enabled={args.filter}"])
            mode = "filtered" if cfg.sim.filter_enabled else "baseline"
            out_dir = Path(args.out) if args.out else _default_out(cfg.name) / mode
            report = _execute(cfg, mode, out_dir)
            print_report(report)
            return EXIT_OK

        # compare
        base = _default_out(cfg.name) if args.out is None else Path(args.out)
        cfg_off = apply_overrides(cfg, ["sim.filter_enabled=off"])
        cfg_on = apply_overrides(cfg, ["sim.filter_enabled=on"])
        baseline = _execute(cfg_off, "baseline", base / "baseline")
        filtered = _execute(cfg_on, "filtered", base / "filtered")
        print_comparison(baseline, filtered)
        return EXIT_OK
    except (QpError, InfeasibleSafetyMarginError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
