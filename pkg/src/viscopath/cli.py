"""Command line entry point.

Subcommands: ``plan`` one scenario, ``generate`` a dataset, ``evaluate`` a
dataset into a report, ``render`` a scenario (optionally with a result) to
SVG. Exit codes: 0 success, 2 usage, 3 invalid input, 4 planner numeric
failure. A plan that ends unsafe still exits 0; the flag lives in the
result file.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from .dynamics import rvp_plan
from .errors import NumericError, ParseError, ValidationError, ViscopathError
from .fileio import (
    atomic_write_text,
    default_params,
    load_params,
    load_result,
    load_scenario,
    save_params,
    save_report,
    save_result,
    save_scenario,
)
from .geometry import Path, path_deviation
from .harness import REFERENCE_SUCCESS_RATE, run_batch
from .iterative import iterative_rvp
from .render import render_svg
from .scenarios import generate_scenario

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_PLANNER = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="viscopath",
        description="Reshape global paths around sensed obstacles by relaxing "
                    "a damped spring-mass chain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan one scenario")
    p.add_argument("--scenario", required=True, help="scenario file")
    p.add_argument("--params", help="params file (defaults when omitted)")
    p.add_argument("--out", required=True, help="result file to write")
    p.add_argument("--svg", help="also render the outcome to this SVG file")
    p.add_argument("--seed", type=int, help="override the integration rng seed")
    p.add_argument("--snapshot-every", type=int, metavar="N",
                   help="write an SVG of the chain every N integration steps")
    p.add_argument("--snapshot-dir", help="directory for snapshots "
                   "(default: directory of --out)")

    g = sub.add_parser("generate", help="generate a scenario dataset")
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--params", help="params file (defaults when omitted)")
    g.add_argument("--out-dir", required=True)

    e = sub.add_parser("evaluate", help="evaluate a dataset directory")
    e.add_argument("--dataset", required=True, help="directory of scenario files")
    e.add_argument("--params", help="params file (defaults when omitted)")
    e.add_argument("--report", required=True, help="report file to write")
    e.add_argument("--jobs", type=int, default=1)

    r = sub.add_parser("render", help="render a scenario to SVG")
    r.add_argument("--scenario", required=True)
    r.add_argument("--result", help="result file with a local path to overlay")
    r.add_argument("--out", required=True)

    w = sub.add_parser("write-params", help="write the default params file")
    w.add_argument("--out", required=True)
    return parser


def _load_bundle(path):
    return load_params(path) if path else default_params()


def _cmd_plan(args) -> int:
    scenario = load_scenario(args.scenario)
    params = _load_bundle(args.params)
    sim = params.sim
    if args.seed is not None:
        sim = replace(sim, rng_seed=args.seed)

    on_step = None
    if args.snapshot_every:
        if args.snapshot_every < 1:
            raise ValidationError("--snapshot-every must be positive", field="snapshot_every")
        snap_dir = args.snapshot_dir or os.path.dirname(os.path.abspath(args.out))
        os.makedirs(snap_dir, exist_ok=True)
        every = args.snapshot_every

        def on_step(iteration, step, positions, _velocities):
            if step % every == 0:
                svg = render_svg(scenario, Path(positions))
                name = f"snapshot_i{iteration:02d}_s{step:05d}.svg"
                atomic_write_text(os.path.join(snap_dir, name), svg)

    result = iterative_rvp(
        scenario.global_path, scenario.grid, params.spring, params.obstacle,
        sim, params.iterative, on_step=on_step,
    )
    deviation = path_deviation(result.path, scenario.global_path)
    save_result(result, deviation, args.out)
    if args.svg:
        atomic_write_text(args.svg, render_svg(scenario, result.path))
    flag = 1 if result.safe else 0
    print(f"safe={flag} iterations={result.iterations_used} "
          f"deviation={deviation:.6g} -> {args.out}")
    return EXIT_OK


def _cmd_generate(args) -> int:
    if args.count < 1:
        raise ValidationError("--count must be at least 1", field="count")
    params = _load_bundle(args.params)
    os.makedirs(args.out_dir, exist_ok=True)
    width = max(4, len(str(args.count - 1)))
    for i in range(args.count):
        scenario = generate_scenario(params.generator, i)
        save_scenario(scenario, os.path.join(args.out_dir, f"scenario_{i:0{width}d}.json"))
    print(f"wrote {args.count} scenarios to {args.out_dir}")
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    if args.jobs < 1:
        raise ValidationError("--jobs must be at least 1", field="jobs")
    params = _load_bundle(args.params)
    names = sorted(
        n for n in os.listdir(args.dataset)
        if n.startswith("scenario_") and n.endswith(".json")
    )
    if not names:
        raise ValidationError(f"no scenario files in {args.dataset}", field="dataset")
    dataset = [load_scenario(os.path.join(args.dataset, n)) for n in names]
    report, _records = run_batch(
        dataset, params.spring, params.obstacle, params.sim, params.iterative,
        worker_count=args.jobs,
    )
    save_report(report, args.report)
    t = report.timing_stats
    print(f"scenarios: {report.total}  successes: {report.successes}  "
          f"success_rate: {report.success_rate:.4f}  "
          f"(reference: {REFERENCE_SUCCESS_RATE:.3f})")
    if t:
        print(f"timing: mean {t['mean']:.3f}s  p95 {t['p95']:.3f}s per scenario "
              "(not part of the report file)")
    print(f"report -> {args.report}")
    return EXIT_OK


def _cmd_render(args) -> int:
    scenario = load_scenario(args.scenario)
    local = None
    if args.result:
        result, _ = load_result(args.result)
        local = result.path
    atomic_write_text(args.out, render_svg(scenario, local))
    print(f"svg -> {args.out}")
    return EXIT_OK


def _cmd_write_params(args) -> int:
    save_params(default_params(), args.out)
    print(f"params -> {args.out}")
    return EXIT_OK


_COMMANDS = {
    "plan": _cmd_plan,
    "generate": _cmd_generate,
    "evaluate": _cmd_evaluate,
    "render": _cmd_render,
    "write-params": _cmd_write_params,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except NumericError as e:
        print(f"error ({e.kind}): {e}", file=sys.stderr)
        return EXIT_PLANNER
    except (ParseError, ValidationError) as e:
        print(f"error ({e.kind}): {e}", file=sys.stderr)
        return EXIT_INVALID
    except ViscopathError as e:
        print(f"error ({e.kind}): {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"error (io): {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
