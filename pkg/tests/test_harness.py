import csv
import json
import math

import numpy as np
import pytest
import yaml

from hsopt import cli
from hsopt.benchmarks import BENCHMARKS, BenchmarkSpec, register
from hsopt.core import Bounds, TraceRecord
from hsopt.harness import (
    OUTPUT_DIR_ENV,
    RunConfig,
    compare_algorithms,
    dump_config,
    export_trace,
    load_config,
    read_trace,
    run_experiment,
)


def _cfg(**kw):
    base = dict(algorithm="hs", benchmark="sphere", seeds=[1, 2], params={"hms": 5}, budget=300)
    base.update(kw)
    return RunConfig.from_dict(base)


def _records(n, d=2):
    return [
        TraceRecord(i, i + 1, 1.0 / (i + 1), tuple(0.1 * i + k for k in range(d)),
                    tuple(-0.5 * i - k for k in range(d)), i % 2 == 0)
        for i in range(n)
    ]


# export_trace ----------------------------------------------------------------

def test_export_empty_trace_header_only(tmp_path):
    path = tmp_path / "t.csv"
    export_trace([], path, dims=2)
    assert path.read_text().splitlines() == [
        "iteration,eval_count,best_value,best_point[0],best_point[1],"
        "candidate_point[0],candidate_point[1],accepted"
    ]


def test_export_three_records(tmp_path):
    path = tmp_path / "t.csv"
    export_trace(_records(3), path)
    rows = list(csv.reader(path.open()))
    assert len(path.read_text().splitlines()) == 4
    # iteration, eval_count, best_value, 2 best_point, 2 candidate_point, accepted
    assert {len(r) for r in rows} == {8}
    assert rows[1][-1] == "true" and rows[2][-1] == "false"


@pytest.mark.parametrize("fmt", ["csv", "jsonl"])
def test_export_roundtrip_and_byte_identical(tmp_path, fmt):
    trace = _records(25, d=3)
    a, b = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
    export_trace(trace, a, fmt)
    export_trace(trace, b, fmt)
    assert a.read_bytes() == b.read_bytes()
    assert read_trace(a) == trace


def test_export_jsonl_field_names(tmp_path):
    path = tmp_path / "t.jsonl"
    export_trace(_records(2), path, "jsonl")
    first = json.loads(path.read_text().splitlines()[0])
    assert list(first) == ["iteration", "eval_count", "best_value", "best_point", "candidate_point", "accepted"]


def test_export_errors(tmp_path):
    with pytest.raises(ValueError):
        export_trace([], tmp_path / "x", "xml")
    with pytest.raises(OSError, match="missing"):
        export_trace(_records(1), tmp_path / "missing" / "x.csv")


# config ----------------------------------------------------------------------

def test_config_roundtrip(tmp_path):
    cfg = _cfg(trace_detail="full", success_threshold=0.5)
    path = tmp_path / "c.yaml"
    dump_config(cfg, path)
    again = load_config(path)
    assert again == cfg
    assert dump_config(again) == dump_config(cfg)


@pytest.mark.parametrize(
    "change, exc",
    [
        ({"algorithm": "aco"}, Exception),
        ({"benchmark": "rastrigin"}, KeyError),
        ({"seeds": []}, Exception),
        ({"params": {"hms": 1}}, ValueError),
        ({"params": {"colour": 3}}, ValueError),
        ({"iterations": 10}, ValueError),
        ({"trace_detail": "verbose"}, Exception),
    ],
)
def test_config_invalid(change, exc):
    with pytest.raises(exc):
        _cfg(**change)


def test_shipped_configs_load():
    from pathlib import Path

    paths = sorted((Path(__file__).parent.parent / "configs").glob("*.yaml"))
    assert len(paths) >= 7
    for p in paths:
        cfg = load_config(p)
        assert len(cfg.seeds) == 30


def test_budget_conversion():
    for algo in ["hs", "sa", "ga", "pso", "fa"]:
        cfg = _cfg(algorithm=algo, params={}, budget=1234)
        assert cfg.make_estimator(0).expected_evals() <= 1234
    assert _cfg(budget=None, iterations=15000, params={"hms": 20}).eval_budget() == 15020


# run_experiment --------------------------------------------------------------

def test_run_experiment_outputs(tmp_path):
    cfg = _cfg(seeds=[5, 3, 9], trace_detail="full")
    results, stats = run_experiment(cfg, output_dir=tmp_path)
    assert [r.seed for r in results] == [5, 3, 9]
    assert all(r.eval_count == 300 for r in results)
    assert stats.n_runs == 3 and 0 <= stats.success_rate <= 1
    values = [r.best.value for r in results]
    assert stats.best_min == min(values) and stats.best_max == max(values)
    assert stats.best_median == sorted(values)[1]
    traces = sorted((tmp_path / "traces").iterdir())
    assert [t.name for t in traces] == ["hs_sphere_seed3.csv", "hs_sphere_seed5.csv", "hs_sphere_seed9.csv"]
    for line in (tmp_path / "results.jsonl").read_text().splitlines():
        rec = json.loads(line)
        assert rec["params_echo"]["hms"] == 5 and len(rec["params_echo"]["b_range"]) == 2
    assert json.loads((tmp_path / "summary.json").read_text())["n_runs"] == 3


def test_summary_mode_writes_no_traces(tmp_path):
    run_experiment(_cfg(), output_dir=tmp_path)
    assert not (tmp_path / "traces").exists()


def test_zero_iterations(tmp_path):
    cfg = _cfg(seeds=[4], budget=None, iterations=0)
    results, stats = run_experiment(cfg, write=False)
    assert results[0].eval_count == 5
    assert stats.best_min == results[0].best.value


def test_identical_trace_files(tmp_path):
    cfg = _cfg(algorithm="pso", params={}, seeds=[7], trace_detail="full", budget=400)
    run_experiment(cfg, output_dir=tmp_path / "a")
    run_experiment(cfg, output_dir=tmp_path / "b")
    a = (tmp_path / "a" / "traces" / "pso_sphere_seed7.csv").read_bytes()
    b = (tmp_path / "b" / "traces" / "pso_sphere_seed7.csv").read_bytes()
    assert a == b


def test_parallel_matches_serial():
    serial, _ = run_experiment(_cfg(seeds=[1, 2, 3]), write=False)
    parallel, _ = run_experiment(_cfg(seeds=[1, 2, 3], n_jobs=2), write=False)
    assert [r.best.value for r in serial] == [r.best.value for r in parallel]


@pytest.fixture
def trap_benchmark():
    # NaN on the right half of the box: some seeds hit it during initialization
    spec = BenchmarkSpec("nan_trap", lambda p: math.nan if p[0] > 0.9 else float(p[0] ** 2),
                         Bounds.cube(-1, 1, 1), (0.0,), 0.0)
    register(spec)
    yield spec
    del BENCHMARKS["nan_trap"]


def test_failed_run_does_not_stop_others(trap_benchmark):
    cfg = RunConfig.from_dict(dict(algorithm="hs", benchmark="nan_trap", seeds=list(range(6)),
                                   params={"hms": 3}, budget=200))
    results, stats = run_experiment(cfg, write=False)
    failed = [r for r in results if r.failed]
    assert failed and len(failed) < 6
    assert all("NaN" in r.error for r in failed)
    assert stats.n_failed == len(failed) and stats.n_runs == 6 - len(failed)


def test_success_stats():
    cfg = _cfg(algorithm="hs", params={}, seeds=[0, 1, 2], budget=2000, success_threshold=1e-3)
    results, stats = run_experiment(cfg, write=False)
    assert stats.success_rate == np.mean([r.best.value <= 1e-3 for r in results])
    if stats.success_rate > 0:
        assert 20 < stats.median_evals_to_threshold <= 2000


# compare ---------------------------------------------------------------------

def test_compare_single_config():
    table = compare_algorithms([_cfg(seeds=[0])])
    assert len(table.rows) == 1 and table.rows[0]["algorithm"] == "hs"


def test_compare_rows_sorted_and_budget_echoed(tmp_path):
    cfgs = [_cfg(algorithm=a, params={}, seeds=[0, 1], budget=500) for a in ("sa", "hs", "pso")]
    table = compare_algorithms(cfgs, output_dir=tmp_path, write=True)
    assert [r["algorithm"] for r in table.rows] == ["hs", "pso", "sa"]
    assert {r["budget"] for r in table.rows} == {500}
    csv_rows = list(csv.DictReader((tmp_path / "comparison.csv").open()))
    assert [r["algorithm"] for r in csv_rows] == ["hs", "pso", "sa"]
    text = (tmp_path / "comparison.txt").read_text().splitlines()
    assert len(text) == 4 and len({len(line) for line in text}) == 1


def test_compare_mismatch():
    with pytest.raises(ValueError, match="benchmarks"):
        compare_algorithms([_cfg(), _cfg(benchmark="rosenbrock_log")])
    with pytest.raises(ValueError, match="budgets"):
        compare_algorithms([_cfg(), _cfg(budget=301)])


# CLI -------------------------------------------------------------------------

def _write(tmp_path, name, **kw):
    path = tmp_path / name
    dump_config(_cfg(**kw), path)
    return path


def test_cli_run(tmp_path, capsys):
    path = _write(tmp_path, "c.yaml")
    assert cli.main(["run", "--config", str(path), "--out", str(tmp_path / "o"), "--seed-override", "11"]) == 0
    out = capsys.readouterr().out
    assert "seed 11" in out
    lines = (tmp_path / "o" / "results.jsonl").read_text().splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["seed"] == 11


def test_cli_env_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "envout"))
    assert cli.main(["run", "--config", str(_write(tmp_path, "c.yaml"))]) == 0
    assert (tmp_path / "envout" / "summary.json").exists()


def test_cli_compare(tmp_path, capsys):
    a = _write(tmp_path, "a.yaml", algorithm="hs", params={})
    b = _write(tmp_path, "b.yaml", algorithm="sa", params={})
    assert cli.main(["compare", "--configs", str(a), str(b), "--out", str(tmp_path)]) == 0
    assert (tmp_path / "comparison.csv").exists()
    assert "sa" in capsys.readouterr().out


def test_cli_bench_list(capsys):
    assert cli.main(["bench-list"]) == 0
    out = capsys.readouterr().out
    assert "rosenbrock_log" in out and "michalewicz2" in out


def test_cli_selftest(capsys):
    assert cli.main(["selftest"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_cli_errors(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text(yaml.safe_dump({"algorithm": "hs", "benchmark": "nope", "seeds": [1]}))
    assert cli.main(["run", "--config", str(bad)]) == 2
    assert "nope" in capsys.readouterr().err
    assert cli.main(["run", "--config", str(tmp_path / "missing.yaml")]) == 2
    bad.write_text(yaml.safe_dump({"algorithm": "bogus", "benchmark": "sphere", "seeds": [1]}))
    assert cli.main(["run", "--config", str(bad)]) == 2


def test_module_entry_point_runs_as_subprocess():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "hsopt", "bench-list"], capture_output=True, text=True)
    assert proc.returncode == 0 and "rosenbrock_log" in proc.stdout
