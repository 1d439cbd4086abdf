"""Seeded experiments: configs, multi-seed runs, summaries and trace export."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import statistics
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import jsonschema
import numpy as np
import yaml

from .baselines import Firefly, GeneticAlgorithm, ParticleSwarm, SimulatedAnnealing
from .benchmarks import BENCHMARKS, get_benchmark
from .core import RunResult, TraceRecord
from .harmony_search import HarmonySearch

__all__ = [
    "ALGORITHMS",
    "OUTPUT_DIR_ENV",
    "RunConfig",
    "SummaryStats",
    "ComparisonTable",
    "load_config",
    "dump_config",
    "run_single",
    "run_experiment",
    "summarize",
    "export_trace",
    "read_trace",
    "compare_algorithms",
    "default_output_dir",
]

logger = logging.getLogger(__name__)

ALGORITHMS = {
    "hs": HarmonySearch,
    "sa": SimulatedAnnealing,
    "ga": GeneticAlgorithm,
    "pso": ParticleSwarm,
    "fa": Firefly,
}

OUTPUT_DIR_ENV = "HSOPT_OUTPUT_DIR"

_SCHEMA = json.loads(resources.files("hsopt").joinpath("config_schema.json").read_text())


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "runs"))


@dataclass
class RunConfig:
    """One experiment: an algorithm, a benchmark and a list of seeds.

    Exactly one of ``budget`` (objective evaluations) or ``iterations`` may
    be set; with neither, the optimizer's own defaults apply.  Budgets are
    converted to the largest iteration count that fits.
    """

    algorithm: str
    benchmark: str
    seeds: list[int]
    params: dict[str, Any] = field(default_factory=dict)
    budget: int | None = None
    iterations: int | None = None
    dims: int | None = None
    output_dir: str | None = None
    trace_detail: str = "summary"
    trace_format: str = "csv"
    success_threshold: float | None = None
    n_jobs: int = 1

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        jsonschema.validate(data, _SCHEMA)
        cfg = cls(**data)
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        return asdict(self)

    def validate(self) -> None:
        """Raise before any run if the config cannot be executed."""
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {sorted(ALGORITHMS)}")
        if self.benchmark not in BENCHMARKS:
            raise KeyError(f"unknown benchmark {self.benchmark!r}; choose from {sorted(BENCHMARKS)}")
        get_benchmark(self.benchmark, self.dims)
        if not self.seeds:
            raise ValueError("seeds must be non-empty")
        if self.budget is not None and self.iterations is not None:
            raise ValueError("set either budget or iterations, not both")
        if self.trace_detail not in ("summary", "full"):
            raise ValueError(f"trace_detail must be 'summary' or 'full', got {self.trace_detail!r}")
        if self.trace_format not in ("csv", "jsonl"):
            raise ValueError(f"trace_format must be 'csv' or 'jsonl', got {self.trace_format!r}")
        if "random_state" in self.params:
            raise ValueError("seeds come from 'seeds', not params.random_state")
        self.make_estimator(self.seeds[0])._validate_params()

    def make_estimator(self, seed: int):
        cls = ALGORITHMS[self.algorithm]
        try:
            est = cls(**self.params, random_state=seed)
        except TypeError as exc:
            raise ValueError(f"bad params for {self.algorithm}: {exc}") from None
        if self.budget is not None:
            est = est.with_budget(self.budget)
        elif self.iterations is not None:
            key = "max_generations" if self.algorithm == "ga" else "max_iterations"
            est.set_params(**{key: self.iterations})
        return est

    def eval_budget(self) -> int:
        """Evaluation ceiling of one run."""
        if self.budget is not None:
            return self.budget
        return self.make_estimator(self.seeds[0]).expected_evals()

    @property
    def spec(self):
        return get_benchmark(self.benchmark, self.dims)

    def threshold(self) -> float:
        if self.success_threshold is not None:
            return float(self.success_threshold)
        known = self.spec.known_optimum_value
        return (0.0 if known is None else known) + 1e-2


def load_config(path) -> RunConfig:
    with open(path) as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a mapping at the top level")
    return RunConfig.from_dict(data)


def dump_config(config: RunConfig, path=None) -> str:
    text = yaml.safe_dump(config.to_dict(), sort_keys=False)
    if path is not None:
        Path(path).write_text(text)
    return text


@dataclass
class SummaryStats:
    n_runs: int
    n_failed: int
    best_min: float
    best_median: float
    best_mean: float
    best_max: float
    best_std: float
    success_threshold: float
    success_rate: float
    median_evals_to_threshold: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def _evals_to_threshold(trace: Sequence[TraceRecord], threshold: float) -> int | None:
    for rec in trace:
        if rec.best_value <= threshold:
            return rec.eval_count
    return None


def summarize(results: Sequence[RunResult], traces: Sequence[Sequence[TraceRecord]], threshold: float) -> SummaryStats:
    """Statistics over completed runs; failed runs are only counted."""
    done = [(r, t) for r, t in zip(results, traces) if not r.failed]
    n_failed = len(results) - len(done)
    if not done:
        nan = math.nan
        return SummaryStats(0, n_failed, nan, nan, nan, nan, nan, threshold, 0.0, None)
    values = [r.best.value for r, _ in done]
    hits = [_evals_to_threshold(t, threshold) for _, t in done]
    hit_evals = [h for h in hits if h is not None]
    return SummaryStats(
        n_runs=len(done),
        n_failed=n_failed,
        best_min=min(values),
        best_median=statistics.median(values),
        best_mean=statistics.fmean(values),
        best_max=max(values),
        best_std=statistics.stdev(values) if len(values) > 1 else 0.0,
        success_threshold=threshold,
        success_rate=sum(v <= threshold for v in values) / len(values),
        median_evals_to_threshold=statistics.median(hit_evals) if hit_evals else None,
    )


def run_single(config: RunConfig, seed: int) -> tuple[RunResult, list[TraceRecord]]:
    """One seeded run; an objective failure yields a failed RunResult instead of raising."""
    est = config.make_estimator(seed)
    spec = config.spec
    ceiling = est.expected_evals()
    try:
        est.fit(spec.objective, max_evals=ceiling)
    except Exception as exc:  # objective failures must not sink the other seeds
        logger.warning("run %s/%s seed %d failed: %s", config.algorithm, spec.name, seed, exc)
        echo = {k: v for k, v in est.get_params().items()}
        return (
            RunResult(None, 0, seed, 0, echo, config.algorithm, spec.name, error=f"{type(exc).__name__}: {exc}"),
            [],
        )
    return est.result_, est.trace_


def _trace_name(config: RunConfig, seed: int) -> str:
    return f"{config.algorithm}_{config.spec.name}_seed{seed}.{config.trace_format}"


def run_experiment(config: RunConfig, output_dir=None, write: bool = True):
    """Run every seed of ``config``.

    Returns ``(results, summary)`` with results in seed order.  When ``write``
    is set, ``results.jsonl`` and ``summary.json`` go to the output directory,
    plus one trace file per seed if ``trace_detail`` is ``"full"``.
    """
    config.validate()
    if config.n_jobs > 1:
        from joblib import Parallel, delayed

        runs = Parallel(n_jobs=config.n_jobs)(delayed(run_single)(config, s) for s in config.seeds)
    else:
        runs = [run_single(config, s) for s in config.seeds]
    results = [r for r, _ in runs]
    traces = [t for _, t in runs]
    summary = summarize(results, traces, config.threshold())

    if write:
        out = Path(output_dir or config.output_dir or default_output_dir())
        out.mkdir(parents=True, exist_ok=True)
        if config.trace_detail == "full":
            tdir = out / "traces"
            tdir.mkdir(exist_ok=True)
            for seed, res, trace in zip(config.seeds, results, traces):
                if not res.failed:
                    export_trace(trace, tdir / _trace_name(config, seed), config.trace_format,
                                 dims=config.spec.dims)
        with open(out / "results.jsonl", "w") as fh:
            for res in results:
                fh.write(json.dumps(res.to_dict()) + "\n")
        (out / "summary.json").write_text(json.dumps(summary.to_dict(), indent=2) + "\n")
        dump_config(config, out / "config.yaml")
    return results, summary


def _trace_header(d: int) -> list[str]:
    return (
        ["iteration", "eval_count", "best_value"]
        + [f"best_point[{i}]" for i in range(d)]
        + [f"candidate_point[{i}]" for i in range(d)]
        + ["accepted"]
    )


def export_trace(trace: Sequence[TraceRecord], path, format: str = "csv", dims: int | None = None) -> None:
    """Write a trace as CSV (header row, one row per record) or JSON lines.

    Floats use ``repr`` so values round-trip exactly.  ``dims`` sizes the CSV
    header of an empty trace.
    """
    if format not in ("csv", "jsonl"):
        raise ValueError(f"unknown trace format {format!r}")
    path = Path(path)
    if format == "jsonl":
        text = "".join(json.dumps(rec.to_dict()) + "\n" for rec in trace)
    else:
        d = len(trace[0].best_point) if trace else (dims or 0)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_trace_header(d))
        for rec in trace:
            writer.writerow(
                [rec.iteration, rec.eval_count, repr(rec.best_value)]
                + [repr(c) for c in rec.best_point]
                + [repr(c) for c in rec.candidate_point]
                + [str(rec.accepted).lower()]
            )
        text = buf.getvalue()
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write trace to {path}: {exc}") from exc


def read_trace(path) -> list[TraceRecord]:
    """Inverse of :func:`export_trace` (format chosen by file suffix)."""
    path = Path(path)
    out = []
    if path.suffix == ".jsonl":
        for line in path.read_text().splitlines():
            r = json.loads(line)
            out.append(TraceRecord(r["iteration"], r["eval_count"], r["best_value"],
                                   tuple(r["best_point"]), tuple(r["candidate_point"]), r["accepted"]))
        return out
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    d = (len(rows[0]) - 4) // 2
    for row in rows[1:]:
        out.append(TraceRecord(
            int(row[0]), int(row[1]), float(row[2]),
            tuple(float(c) for c in row[3:3 + d]),
            tuple(float(c) for c in row[3 + d:3 + 2 * d]),
            row[-1] == "true",
        ))
    return out


_TABLE_COLUMNS = [
    "algorithm", "budget", "n_runs", "n_failed", "best_min", "best_median", "best_mean",
    "best_max", "best_std", "success_threshold", "success_rate", "median_evals_to_threshold",
]


@dataclass
class ComparisonTable:
    rows: list[dict]

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, _TABLE_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({k: ("" if row[k] is None else row[k]) for k in _TABLE_COLUMNS})
        if path is not None:
            Path(path).write_text(buf.getvalue())
        return buf.getvalue()

    def to_text(self) -> str:
        def fmt(v):
            if v is None:
                return "-"
            if isinstance(v, float):
                return f"{v:.6g}"
            return str(v)

        cells = [_TABLE_COLUMNS] + [[fmt(row[k]) for k in _TABLE_COLUMNS] for row in self.rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(_TABLE_COLUMNS))]
        lines = ["  ".join(c.rjust(w) if j else c.ljust(w) for j, (c, w) in enumerate(zip(r, widths)))
                 for r in cells]
        return "\n".join(lines) + "\n"


def compare_algorithms(configs: Sequence[RunConfig], output_dir=None, write: bool = False) -> ComparisonTable:
    """Run each config and tabulate one row per algorithm, sorted by name.

    All configs must share the benchmark and the per-run evaluation budget.
    """
    if not configs:
        raise ValueError("need at least one config")
    for cfg in configs:
        cfg.validate()
    benchmarks = {cfg.spec.name for cfg in configs}
    if len(benchmarks) != 1:
        raise ValueError(f"configs use different benchmarks: {sorted(benchmarks)}")
    budgets = {cfg.eval_budget() for cfg in configs}
    if len(budgets) != 1:
        raise ValueError(f"configs use different evaluation budgets: {sorted(budgets)}")

    rows = []
    for cfg in sorted(configs, key=lambda c: c.algorithm):
        _, stats = run_experiment(cfg, write=False)
        rows.append({"algorithm": cfg.algorithm, "budget": cfg.eval_budget(), **stats.to_dict()})
    table = ComparisonTable(rows)
    if write:
        out = Path(output_dir or default_output_dir())
        out.mkdir(parents=True, exist_ok=True)
        table.to_csv(out / "comparison.csv")
        (out / "comparison.txt").write_text(table.to_text())
    return table
