"""Command-line pipeline: build the cell network, plan the affine motion,
validate safety and mechanism reach, simulate, and emit CSV traces plus a
plain-text report.

Subcommands:
  run        full pipeline; writes trajectory.csv, elbows.csv, report.txt
  validate   plan + safety checks only, no simulation and no trace files
  reference  print the reference configuration, d_min, and lambda_min
"""
from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import planner, simulator
from .errors import AtugvError, UnsafePlanError, UnreachableSeparationError
from .network import solve_reference_positions
from .safety import SafetyBound
from .scenario import BUNDLED, Scenario, load_scenario

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_ERROR = 2

_FMT = ".9g"


def _fmt(value: float) -> str:
    return format(value, _FMT)


def write_trajectory_csv(path: Path, trace: simulator.SimulationTrace):
    """One row per step per cell; velocity-command columns are empty for
    unpowered cells (no command exists)."""
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["t", "cell_id", "x_des", "y_des", "x_act", "y_act", "vx_cmd", "vy_cmd", "err_norm"]
        )
        powered = set(trace.powered)
        for k, t in enumerate(trace.times):
            for i in trace.cells:
                if i in powered:
                    vx = _fmt(trace.velocity_commands[i][k, 0])
                    vy = _fmt(trace.velocity_commands[i][k, 1])
                else:
                    vx = vy = ""
                writer.writerow(
                    [
                        _fmt(t),
                        i,
                        _fmt(trace.desired[i][k, 0]),
                        _fmt(trace.desired[i][k, 1]),
                        _fmt(trace.actual[i][k, 0]),
                        _fmt(trace.actual[i][k, 1]),
                        vx,
                        vy,
                        _fmt(trace.errors[i][k]),
                    ]
                )


def write_elbow_csv(path: Path, trace: simulator.SimulationTrace):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "cell_i", "cell_j", "theta_des", "theta_act"])
        for k, t in enumerate(trace.times):
            for (i, j), des in sorted(trace.elbow_desired.items()):
                act = trace.elbow_actual[(i, j)][k]
                writer.writerow(
                    [_fmt(t), i, j, _fmt(des[k]), "" if math.isnan(act) else _fmt(act)]
                )


def _load(args) -> Scenario:
    return load_scenario(args.scenario, strict=not args.lenient)


def _build(scenario: Scenario, sample_count=None):
    reference = solve_reference_positions(scenario.graph, scenario.side_length)
    bound = SafetyBound.from_reference(scenario.graph.cell_radius, reference)
    trajectory = planner.plan(
        scenario.plan_spec,
        scenario.graph,
        reference,
        sample_count or scenario.sample_count,
    )
    return reference, bound, trajectory


def _report_lines(scenario, bound, verdicts, extras=()):
    lines = [
        f"scenario: {scenario.name}",
        f"cells: {len(scenario.graph.cells)} "
        f"(powered: {sorted(scenario.graph.powered)}, "
        f"unpowered: {sorted(scenario.graph.unpowered)})",
        f"d_min: {_fmt(bound.d_min)} m",
        f"lambda_min: {_fmt(bound.lambda_min)}",
    ]
    lines.extend(verdicts)
    lines.extend(extras)
    lines.append("arm/link collision: NOT VERIFIED (only cell-disk clearance is checked)")
    return lines


def cmd_reference(args) -> int:
    scenario = _load(args)
    reference = solve_reference_positions(scenario.graph, scenario.side_length)
    bound = SafetyBound.from_reference(scenario.graph.cell_radius, reference)
    print(f"scenario: {scenario.name}")
    for i in sorted(reference.positions):
        x, y = reference.positions[i]
        tag = "powered" if i in scenario.graph.powered else "unpowered"
        print(f"  cell {i}: ({_fmt(x)}, {_fmt(y)}) m  [{tag}]")
    print(f"d_min: {_fmt(reference.d_min)} m")
    print(f"lambda_min: {_fmt(bound.lambda_min)}")
    return EXIT_OK


def _validate_verdicts(scenario, reference, bound):
    """Plan-time verdicts: principal-strain bound and mechanism reach."""
    verdicts = []
    ok = True
    try:
        planner.plan(scenario.plan_spec, scenario.graph, reference, scenario.sample_count)
        verdicts.append("strain-bound verdict: SAFE (all samples)")
        verdicts.append("mechanism-reach verdict: OK (all joints, all samples)")
    except UnsafePlanError as exc:
        ok = False
        verdicts.append(
            "strain-bound verdict: UNSAFE — principal-strain bound violated "
            f"(collision-safety guarantee): {exc}"
        )
    except UnreachableSeparationError as exc:
        ok = False
        verdicts.append(f"mechanism-reach verdict: UNREACHABLE — {exc}")
    return ok, verdicts


def cmd_validate(args) -> int:
    scenario = _load(args)
    reference = solve_reference_positions(scenario.graph, scenario.side_length)
    bound = SafetyBound.from_reference(scenario.graph.cell_radius, reference)
    ok, verdicts = _validate_verdicts(scenario, reference, bound)
    for line in _report_lines(scenario, bound, verdicts):
        print(line)
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_run(args) -> int:
    scenario = _load(args)
    reference = solve_reference_positions(scenario.graph, scenario.side_length)
    bound = SafetyBound.from_reference(scenario.graph.cell_radius, reference)

    out_dir = args.output_dir or os.environ.get("ATUGV_OUTPUT_DIR") or "."
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    ok, verdicts = _validate_verdicts(scenario, reference, bound)
    extras = []
    if ok:
        trajectory = planner.plan(
            scenario.plan_spec,
            scenario.graph,
            reference,
            args.samples or scenario.sample_count,
        )
        sim_cfg = scenario.sim
        if args.dt is not None:
            sim_cfg = simulator.SimConfig(
                dt=args.dt,
                model=sim_cfg.model,
                alpha=sim_cfg.alpha,
                k_v=sim_cfg.k_v,
                initial_offsets=sim_cfg.initial_offsets,
            )
        trace = simulator.run(scenario.graph, reference, trajectory, sim_cfg)
        write_trajectory_csv(out_dir / "trajectory.csv", trace)
        write_elbow_csv(out_dir / "elbows.csv", trace)
        min_clear = float(np.min(trace.min_clearance))
        clear_ok = trace.clearance_safe
        verdicts.append(
            f"trace clearance verdict: {'SAFE' if clear_ok else 'UNSAFE'} "
            f"(min clearance {_fmt(min_clear)} m vs required "
            f"{_fmt(2 * scenario.graph.cell_radius)} m)"
        )
        threshold = scenario.terminal_error_threshold
        worst = max(trace.terminal_errors.values())
        err_ok = worst < threshold
        verdicts.append(
            f"terminal-error verdict: {'OK' if err_ok else 'EXCEEDED'} "
            f"(worst {_fmt(worst)} m vs threshold {_fmt(threshold)} m)"
        )
        extras.append("terminal tracking errors [m]:")
        for i in trace.cells:
            extras.append(f"  cell {i}: {_fmt(trace.terminal_errors[i])}")
        ok = ok and clear_ok and err_ok

    lines = _report_lines(scenario, bound, verdicts, extras)
    (out_dir / "report.txt").write_text("\n".join(lines) + "\n")
    for line in lines:
        print(line)
    return EXIT_OK if ok else EXIT_VERDICT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atugv",
        description="Plan and simulate safe affine transformations of a "
        "multi-cell ground vehicle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, helptext in (
        ("run", cmd_run, "full pipeline: plan, validate, simulate, emit CSVs and report"),
        ("validate", cmd_validate, "plan and safety checks only (no trace files)"),
        ("reference", cmd_reference, "print the reference configuration"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument(
            "scenario",
            help=f"scenario file path or bundled name {BUNDLED}",
        )
        p.add_argument("--lenient", action="store_true", help="allow unknown config keys")
        p.add_argument(
            "--strict",
            dest="lenient",
            action="store_false",
            help="reject unknown config keys (default)",
        )
        p.add_argument("--seed", type=int, default=None, help="reserved; pipeline is deterministic")
        if name == "run":
            p.add_argument("--output-dir", default=None, help="directory for CSVs and report")
            p.add_argument("--samples", type=int, default=None, help="plan sample count override")
            p.add_argument("--dt", type=float, default=None, help="simulation timestep override")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AtugvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
