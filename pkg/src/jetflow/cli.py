"""Command-line front end: run scenarios, verify, sample stored fields.

Output locations resolve in this order: --output-dir flag, the
JETFLOW_OUTPUT_DIR environment variable, then the current directory.
Identical scenario file and seed give bit-identical output files.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import io as jio
from .errors import JetflowError
from .integrators import integrate
from .scenarios import PRESETS, load_scenario, preset
from .verify import run_suite


def _output_dir(args) -> Path:
    if args.output_dir:
        path = Path(args.output_dir)
    else:
        path = Path(os.environ.get("JETFLOW_OUTPUT_DIR", "."))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load(target):
    """A scenario file path, or a bare preset name."""
    if Path(target).exists():
        return load_scenario(target)
    if target in PRESETS:
        return preset(target)
    raise JetflowError(f"no scenario file {target!r} and no preset of "
                       "that name")


def _cmd_run(args) -> int:
    scenario = _load(args.scenario)
    outdir = _output_dir(args)
    system = scenario.build_system()
    state = scenario.build_state()
    traj = integrate(system, state, scenario.integrator)

    stem = scenario.name
    traj_path = outdir / f"{stem}_trajectory.jsonl"
    diag_path = outdir / f"{stem}_diagnostics.csv"
    jio.write_trajectory(traj_path, scenario, traj.times, traj.states,
                         seed=args.seed)
    jio.write_diagnostics(diag_path, system, scenario, traj.times,
                          traj.states)
    written = [traj_path, diag_path]

    if scenario.field_grid is not None:
        times = scenario.field_times or [traj.times[-1]]
        for t in times:
            idx = int(np.argmin(np.abs(np.array(traj.times) - t)))
            field = system.field(traj.states[idx])
            field_path = outdir / f"{stem}_field_t{traj.times[idx]:g}.csv"
            jio.write_field_samples(field_path, field, scenario.field_grid)
            written.append(field_path)

    print(f"{scenario.name}: {len(traj.times)} saved steps, "
          f"status {traj.status}")
    for path in written:
        print(f"  wrote {path}")
    return 0


def _cmd_verify(args) -> int:
    results = run_suite(args.suite, seed=args.seed)
    for result in results:
        print(result.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def _parse_grid(text):
    parts = text.split(",")
    if len(parts) != 6:
        raise argparse.ArgumentTypeError(
            "grid must be nx,ny,xmin,xmax,ymin,ymax")
    return (int(parts[0]), int(parts[1])) + tuple(float(v)
                                                  for v in parts[2:])


def _cmd_sample_field(args) -> int:
    meta, records = jio.read_trajectory(args.trajectory)
    times = np.array([rec["t"] for rec in records])
    if len(times) == 0:
        raise JetflowError(f"{args.trajectory}: no saved steps")
    if args.t < times[0] - 1e-12 or args.t > times[-1] + 1e-12:
        raise JetflowError(
            f"time {args.t} outside stored range "
            f"[{times[0]:g}, {times[-1]:g}]")
    idx = int(np.argmin(np.abs(times - args.t)))
    field = jio.field_from_record(meta, records[idx])
    out = Path(args.output) if args.output else \
        _output_dir(args) / f"{meta['name']}_field_t{times[idx]:g}.csv"
    jio.write_field_samples(out, field, args.grid)
    print(f"sampled t={times[idx]:g} onto {args.grid[0]}x{args.grid[1]} "
          f"grid\n  wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jetflow",
        description="Geometric particle methods for fluid-like flows")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized verification suites")
    parser.add_argument("--output-dir", default=None,
                        help="where to write output files (default: "
                             "$JETFLOW_OUTPUT_DIR or the current directory)")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario file or preset")
    run_p.add_argument("scenario", help="TOML scenario file or preset name")
    run_p.set_defaults(func=_cmd_run)

    ver_p = sub.add_parser("verify", help="run a verification suite")
    ver_p.add_argument("suite",
                       help="interpolation | gradients | conservation | "
                            "curvature | convergence | vortex | spectral "
                            "| all")
    ver_p.set_defaults(func=_cmd_verify)

    smp_p = sub.add_parser("sample-field",
                           help="sample the velocity field of a stored "
                                "trajectory on a grid")
    smp_p.add_argument("trajectory", help="trajectory .jsonl file")
    smp_p.add_argument("--t", type=float, required=True,
                       help="stored time to sample at")
    smp_p.add_argument("--grid", type=_parse_grid, required=True,
                       help="nx,ny,xmin,xmax,ymin,ymax")
    smp_p.add_argument("--output", default=None, help="output CSV path")
    smp_p.set_defaults(func=_cmd_sample_field)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except JetflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
