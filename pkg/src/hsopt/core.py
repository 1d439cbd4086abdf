"""Shared types and helpers used by every optimizer.

All optimizers minimize.  Each run owns exactly one ``numpy.random.Generator``
(PCG64) seeded from a 64-bit integer, so a run is fully determined by its
parameters and seed.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

__all__ = [
    "Bounds",
    "EvaluatedSolution",
    "Objective",
    "CountingObjective",
    "BudgetExceededError",
    "ObjectiveError",
    "TraceRecord",
    "RunResult",
    "BaseOptimizer",
    "make_rng",
    "spawn_rngs",
    "clamp",
    "uniform_point",
    "check_point",
    "check_objective",
]

SEED_MAX = 2**64 - 1


class ObjectiveError(ValueError):
    """The objective returned a non-finite value."""


class BudgetExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class Bounds:
    """Axis-aligned box ``[lower[i], upper[i]]`` for each dimension."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=np.float64)).copy()
        upper = np.atleast_1d(np.asarray(self.upper, dtype=np.float64)).copy()
        if lower.ndim != 1 or upper.ndim != 1:
            raise ValueError("bounds must be one-dimensional")
        if lower.shape != upper.shape:
            raise ValueError(
                f"lower and upper have different sizes ({lower.size} != {upper.size})"
            )
        if lower.size == 0:
            raise ValueError("bounds need at least one dimension")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValueError("bounds must be finite")
        if np.any(lower >= upper):
            raise ValueError("every lower bound must be strictly below its upper bound")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "Bounds":
        arr = np.asarray(pairs, dtype=np.float64)
        return cls(arr[:, 0], arr[:, 1])

    @classmethod
    def cube(cls, low: float, high: float, dims: int) -> "Bounds":
        return cls(np.full(dims, low), np.full(dims, high))

    @property
    def dims(self) -> int:
        return int(self.lower.size)

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, point) -> bool:
        p = np.asarray(point, dtype=np.float64)
        return bool(np.all(p >= self.lower) and np.all(p <= self.upper))

    def to_list(self) -> list[list[float]]:
        return [[float(lo), float(hi)] for lo, hi in zip(self.lower, self.upper)]

    def __eq__(self, other):
        if not isinstance(other, Bounds):
            return NotImplemented
        return np.array_equal(self.lower, other.lower) and np.array_equal(
            self.upper, other.upper
        )

    def __hash__(self):
        return hash((self.lower.tobytes(), self.upper.tobytes()))


def check_point(point, bounds: Bounds | None = None) -> np.ndarray:
    """Return ``point`` as a finite 1-D float64 array, checking its length."""
    p = np.asarray(point, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError(f"expected a 1-D point, got shape {p.shape}")
    if bounds is not None and p.size != bounds.dims:
        raise ValueError(f"point has {p.size} components but bounds have {bounds.dims}")
    if np.any(np.isnan(p)):
        raise ValueError(f"point contains NaN: {p.tolist()}")
    return p


def clamp(point, bounds: Bounds) -> np.ndarray:
    """Saturate each component of ``point`` into ``bounds``."""
    p = check_point(point, bounds)
    return np.minimum(bounds.upper, np.maximum(bounds.lower, p))


def make_rng(seed: int) -> np.random.Generator:
    """The one random stream a run owns: PCG64 seeded with a 64-bit integer."""
    if isinstance(seed, (bool, np.bool_)) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def spawn_rngs(seed: int, n: int) -> list[np.random.Generator]:
    """Independent child streams derived from one seed."""
    make_rng(seed)
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(n)]


def uniform_point(bounds: Bounds, rng: np.random.Generator) -> np.ndarray:
    return bounds.lower + rng.random(bounds.dims) * bounds.width


class Objective:
    """A named, deterministic objective ``f: R^d -> R`` over a box.

    Parameters
    ----------
    func : callable
        Takes a 1-D float array and returns a scalar.
    bounds : Bounds
    name : str, optional
    """

    def __init__(self, func: Callable[[np.ndarray], float], bounds: Bounds, name: str | None = None):
        if not callable(func):
            raise TypeError("func is not callable")
        self.func = func
        self.bounds = bounds
        self.name = name or getattr(func, "__name__", "objective")

    def evaluate(self, point) -> float:
        return float(self.func(point))

    __call__ = evaluate

    def __repr__(self):
        return f"Objective({self.name!r}, dims={self.bounds.dims})"


def check_objective(objective, bounds=None) -> Objective:
    """Coerce ``objective`` (an :class:`Objective` or a plain callable) into an Objective.

    ``bounds`` overrides the objective's own bounds and is required for plain callables.
    Anything pair-like is accepted for ``bounds``.
    """
    if bounds is not None and not isinstance(bounds, Bounds):
        bounds = Bounds.from_pairs(bounds)
    if isinstance(objective, Objective):
        if bounds is None:
            return objective
        return Objective(objective.func, bounds, objective.name)
    if bounds is None:
        raise ValueError("bounds are required when the objective is a plain callable")
    return Objective(objective, bounds)


class CountingObjective:
    """Counts calls, rejects NaN results and optionally enforces a hard budget."""

    def __init__(self, objective: Objective, max_evals: int | None = None):
        self.objective = objective
        self.max_evals = max_evals
        self.count = 0

    @property
    def bounds(self) -> Bounds:
        return self.objective.bounds

    @property
    def name(self) -> str:
        return self.objective.name

    def __call__(self, point) -> float:
        if self.max_evals is not None and self.count >= self.max_evals:
            raise BudgetExceededError(f"evaluation budget of {self.max_evals} exhausted")
        self.count += 1
        value = self.objective.evaluate(point)
        if math.isnan(value):
            raise ObjectiveError(
                f"objective {self.name!r} returned NaN at point {np.asarray(point).tolist()}"
            )
        return value


@dataclass(frozen=True)
class EvaluatedSolution:
    point: np.ndarray
    value: float

    @classmethod
    def evaluate(cls, objective, point) -> "EvaluatedSolution":
        p = np.array(point, dtype=np.float64)
        p.setflags(write=False)
        return cls(p, float(objective(p)))

    def to_dict(self) -> dict:
        return {"point": [float(c) for c in self.point], "value": float(self.value)}


@dataclass(frozen=True, slots=True)
class TraceRecord:
    """One objective evaluation and the best-so-far state right after it.

    ``iteration`` is 0 for initial-population evaluations and counts
    iterations (generations for the GA) from 1 afterwards.
    """

    iteration: int
    eval_count: int
    best_value: float
    best_point: tuple[float, ...]
    candidate_point: tuple[float, ...]
    accepted: bool

    def to_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "eval_count": self.eval_count,
            "best_value": self.best_value,
            "best_point": list(self.best_point),
            "candidate_point": list(self.candidate_point),
            "accepted": self.accepted,
        }


@dataclass
class RunResult:
    best: EvaluatedSolution | None
    eval_count: int
    seed: int | None
    wall_time_ms: int
    params_echo: dict[str, Any]
    algorithm: str = ""
    benchmark: str = ""
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "benchmark": self.benchmark,
            "seed": self.seed,
            "best": None if self.best is None else self.best.to_dict(),
            "eval_count": self.eval_count,
            "wall_time_ms": self.wall_time_ms,
            "params_echo": self.params_echo,
            "error": self.error,
        }


class _Tracker:
    """Evaluates candidates and keeps the best-so-far trace."""

    def __init__(self, objective: CountingObjective, record: bool = True):
        self.objective = objective
        self.record = record
        self.trace: list[TraceRecord] = []
        self.best_value = math.inf
        self.best_point: np.ndarray | None = None
        self._best_tuple: tuple[float, ...] = ()

    def evaluate(self, point: np.ndarray) -> float:
        return self.objective(point)

    def log(self, iteration: int, point: np.ndarray, value: float, accepted: bool) -> None:
        if value < self.best_value or self.best_point is None:
            self.best_value = value
            self.best_point = np.array(point, dtype=np.float64)
            self._best_tuple = tuple(map(float, point))
        if self.record:
            self.trace.append(
                TraceRecord(
                    iteration,
                    self.objective.count,
                    self.best_value,
                    self._best_tuple,
                    tuple(map(float, point)),
                    bool(accepted),
                )
            )


def _check_int(name, value, minimum):
    if isinstance(value, (bool, np.bool_)) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")


def _check_real(name, value, low=None, high=None, low_open=False, high_open=False):
    v = float(value)
    if not math.isfinite(v):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if low is not None and (v < low or (low_open and v == low)):
        raise ValueError(f"{name} out of range: {value!r}")
    if high is not None and (v > high or (high_open and v == high)):
        raise ValueError(f"{name} out of range: {value!r}")
    return v


def _per_dim(name, value, bounds: Bounds, default_fraction: float) -> np.ndarray:
    """Resolve a per-dimension positive scale; ``None`` means a fraction of the box width."""
    if value is None:
        return default_fraction * bounds.width
    arr = np.broadcast_to(np.asarray(value, dtype=np.float64), (bounds.dims,)).copy()
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return arr


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return [float(v) for v in value]
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


class BaseOptimizer(BaseEstimator):
    """Estimator-style base class: configure in ``__init__``, minimize in ``fit``.

    After ``fit(objective)`` the estimator exposes ``best_point_``,
    ``best_value_``, ``n_evals_``, ``trace_`` and ``result_``.
    ``random_state`` must be an integer seed (``None`` draws one from the OS
    and records it in ``seed_``).
    """

    algorithm = ""

    def fit(self, objective, bounds=None, *, max_evals=None, record_trace=True):
        """Minimize ``objective`` over ``bounds``.

        Parameters
        ----------
        objective : Objective or callable
        bounds : Bounds or sequence of (low, high) pairs, optional
            Required when ``objective`` is a plain callable.
        max_evals : int, optional
            Hard evaluation ceiling; exceeding it raises BudgetExceededError.
        record_trace : bool, default True
            When False only the final best is kept (``trace_`` is empty).
        """
        objective = check_objective(objective, bounds)
        self._validate_params()
        seed = self.random_state
        if seed is None:
            seed = int(np.random.SeedSequence().entropy % (SEED_MAX + 1))
        rng = make_rng(seed)
        counter = CountingObjective(objective, max_evals)
        tracker = _Tracker(counter, record=record_trace)
        start = time.perf_counter()
        resolved = self._resolve_params(objective.bounds)
        self._minimize(tracker, objective.bounds, rng, resolved)
        wall_ms = int(round((time.perf_counter() - start) * 1000))

        self.seed_ = seed
        self.bounds_ = objective.bounds
        self.best_point_ = tracker.best_point
        self.best_value_ = tracker.best_value
        self.n_evals_ = counter.count
        self.trace_ = tracker.trace
        echo = {k: _jsonable(v) for k, v in self.get_params().items()}
        echo.update({k: _jsonable(v) for k, v in resolved.items()})
        echo["random_state"] = seed
        self.params_echo_ = echo
        self.result_ = RunResult(
            best=EvaluatedSolution(_frozen(tracker.best_point), tracker.best_value),
            eval_count=counter.count,
            seed=seed,
            wall_time_ms=wall_ms,
            params_echo=echo,
            algorithm=self.algorithm,
            benchmark=objective.name,
        )
        return self

    def expected_evals(self) -> int:
        """Number of objective evaluations ``fit`` will perform with the current params."""
        raise NotImplementedError

    def with_budget(self, max_evals: int) -> "BaseOptimizer":
        """Clone with the iteration count set to the most that fits in ``max_evals``."""
        raise NotImplementedError

    def _validate_params(self) -> None:
        raise NotImplementedError

    def _resolve_params(self, bounds: Bounds) -> dict:
        return {}

    def _minimize(self, tracker: _Tracker, bounds: Bounds, rng, resolved: dict) -> None:
        raise NotImplementedError

    def score(self, objective=None, bounds=None) -> float:
        """Negated best objective value (higher is better, as sklearn expects)."""
        check_is_fitted(self, "best_value_")
        return -float(self.best_value_)


def _frozen(point) -> np.ndarray:
    p = np.array(point, dtype=np.float64)
    p.setflags(write=False)
    return p
