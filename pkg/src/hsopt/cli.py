"""Command line entry point: ``hsopt {run,compare,bench-list,selftest}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import jsonschema
import yaml

from .benchmarks import BENCHMARKS
from .harness import OUTPUT_DIR_ENV, compare_algorithms, default_output_dir, load_config, run_experiment


def _cmd_run(args) -> int:
    config = load_config(args.config)
    if args.seed_override is not None:
        config.seeds = [args.seed_override]
    if args.jobs is not None:
        config.n_jobs = args.jobs
    out = Path(args.out or config.output_dir or default_output_dir())
    results, summary = run_experiment(config, output_dir=out)
    for res in results:
        if res.failed:
            print(f"seed {res.seed}: FAILED {res.error}")
        else:
            print(f"seed {res.seed}: best {res.best.value:.10g} at {res.best.point.tolist()} "
                  f"({res.eval_count} evals, {res.wall_time_ms} ms)")
    print(json.dumps(summary.to_dict(), indent=2))
    print(f"wrote {out}")
    return 0 if summary.n_failed == 0 else 1


def _cmd_compare(args) -> int:
    configs = [load_config(p) for p in args.configs]
    out = Path(args.out or default_output_dir())
    table = compare_algorithms(configs, output_dir=out, write=True)
    sys.stdout.write(table.to_text())
    print(f"wrote {out / 'comparison.csv'}")
    return 0


def _cmd_bench_list(args) -> int:
    for name in sorted(BENCHMARKS):
        spec = BENCHMARKS[name]
        print(f"{name:16s} dims={spec.dims} bounds={spec.bounds.to_list()} "
              f"optimum={spec.known_optimum_value} at {spec.known_optimum_point}")
    return 0


def _cmd_selftest(args) -> int:
    from .selftest import run_selftest

    results = run_selftest()
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}" + (f"  ({r.message})" if r.message else ""))
    n_bad = sum(not r.passed for r in results)
    print(f"{len(results) - n_bad}/{len(results)} checks passed")
    return 0 if n_bad == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsopt",
        description="Harmony search and baseline metaheuristics on benchmark functions.",
        epilog=f"Default output directory: ${OUTPUT_DIR_ENV} or ./runs",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one config over all of its seeds")
    p.add_argument("--config", required=True, help="YAML run config")
    p.add_argument("--seed-override", type=int, help="run only this seed")
    p.add_argument("--out", help="output directory")
    p.add_argument("--jobs", type=int, help="parallel seeds")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("compare", help="compare algorithms on one benchmark and budget")
    p.add_argument("--configs", nargs="+", required=True)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("bench-list", help="list registered benchmarks")
    p.set_defaults(func=_cmd_bench_list)

    p = sub.add_parser("selftest", help="run the closed-form oracle checks")
    p.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, KeyError, TypeError, OSError, yaml.YAMLError, jsonschema.ValidationError) as exc:
        msg = exc.message if isinstance(exc, jsonschema.ValidationError) else str(exc)
        print(f"hsopt: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
