"""Pilot runs that fixed the baseline thresholds used by the test suite.

Runs every ``configs/*_rosenbrock_50k.yaml`` config (30 seeds, 50,000
evaluations) plus the sphere checks for SA and PSO, and writes the observed
success rates and value quantiles to ``scripts/pilot_results.txt``.

    python scripts/pilot_baselines.py
"""

from pathlib import Path

import numpy as np

from hsopt import ParticleSwarm, SimulatedAnnealing, get_benchmark, load_config, run_experiment

ROOT = Path(__file__).resolve().parent.parent


def quantiles(values):
    q = np.quantile(values, [0.0, 0.5, 0.9, 1.0])
    return "min %.3g  median %.3g  p90 %.3g  max %.3g" % tuple(q)


def main():
    lines = []
    for path in sorted((ROOT / "configs").glob("*_rosenbrock_50k.yaml")):
        cfg = load_config(path)
        results, stats = run_experiment(cfg, write=False)
        values = [r.best.value for r in results]
        lines.append(f"{path.name}: success_rate(<= {cfg.threshold()}) = {stats.success_rate:.3f}  "
                     + quantiles(values))

    sphere = get_benchmark("sphere").objective
    for est, label in [
        (SimulatedAnnealing(max_iterations=20000), "sa sphere d=2, 20000 iterations"),
        (ParticleSwarm(swarm_size=20, max_iterations=1000), "pso sphere d=2, swarm 20, 1000 iterations"),
    ]:
        values = [est.set_params(random_state=s).fit(sphere, record_trace=False).best_value_ for s in range(30)]
        lines.append(f"{label}: " + quantiles(values))

    text = "\n".join(lines) + "\n"
    (ROOT / "scripts" / "pilot_results.txt").write_text(text)
    print(text, end="")


if __name__ == "__main__":
    main()
