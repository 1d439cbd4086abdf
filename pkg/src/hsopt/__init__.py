"""Harmony search with SA, GA, PSO and firefly baselines, benchmark functions
and a seeded experiment harness."""

from .baselines import Firefly, GeneticAlgorithm, ParticleSwarm, SimulatedAnnealing
from .benchmarks import BENCHMARKS, get_benchmark
from .core import Bounds, EvaluatedSolution, Objective, RunResult, TraceRecord
from .harmony_search import HarmonySearch, run_hs
from .harness import RunConfig, compare_algorithms, export_trace, load_config, run_experiment

__version__ = "0.1.0"

__all__ = [
    "Bounds",
    "EvaluatedSolution",
    "Objective",
    "RunResult",
    "TraceRecord",
    "HarmonySearch",
    "SimulatedAnnealing",
    "GeneticAlgorithm",
    "ParticleSwarm",
    "Firefly",
    "BENCHMARKS",
    "get_benchmark",
    "run_hs",
    "RunConfig",
    "run_experiment",
    "compare_algorithms",
    "export_trace",
    "load_config",
]
