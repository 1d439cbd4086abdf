"""Harmony search.

Each new candidate ("harmony") is built component by component.  With
probability ``r_accept`` a component is copied from a random memory member,
and a copied component is then nudged by ``b_range * eps`` (``eps`` uniform in
[-1, 1]) with probability ``r_pa``.  Otherwise the component is drawn uniformly
from the box.  The candidate replaces the worst memory member only if it is
strictly better.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import clone

from .core import (
    BaseOptimizer,
    Bounds,
    EvaluatedSolution,
    _check_int,
    _check_real,
    _per_dim,
    check_objective,
    clamp,
    uniform_point,
)

__all__ = [
    "HarmonyMemory",
    "HarmonySearch",
    "branch_probabilities",
    "pitch_adjust",
    "improvise",
    "init_memory",
    "hs_step",
    "run_hs",
    "MEMORY",
    "PITCH",
    "RANDOM",
]

# branch codes returned by improvise(..., return_branches=True)
MEMORY, PITCH, RANDOM = 0, 1, 2

DEFAULT_BANDWIDTH_FRACTION = 0.05


class HarmonyMemory:
    """Fixed-size pool of evaluated solutions.

    ``points`` has shape (hms, d) and ``values`` shape (hms,).
    """

    def __init__(self, points, values, bounds: Bounds):
        points = np.array(points, dtype=np.float64, ndmin=2)
        values = np.array(values, dtype=np.float64)
        if points.shape[0] != values.shape[0]:
            raise ValueError("points and values have different lengths")
        if points.shape[0] < 2:
            raise ValueError("harmony memory needs at least two members")
        if points.shape[1] != bounds.dims:
            raise ValueError("memory points do not match the bounds dimension")
        self.points = points
        self.values = values
        self.bounds = bounds

    def __len__(self):
        return self.values.shape[0]

    @property
    def worst_index(self) -> int:
        return int(np.argmax(self.values))

    @property
    def best_index(self) -> int:
        return int(np.argmin(self.values))

    @property
    def best(self) -> EvaluatedSolution:
        i = self.best_index
        p = self.points[i].copy()
        p.setflags(write=False)
        return EvaluatedSolution(p, float(self.values[i]))

    def members(self) -> list[EvaluatedSolution]:
        out = []
        for p, v in zip(self.points, self.values):
            p = p.copy()
            p.setflags(write=False)
            out.append(EvaluatedSolution(p, float(v)))
        return out


def branch_probabilities(r_accept: float, r_pa: float) -> tuple[float, float, float]:
    """Per-component probabilities of (memory only, pitch adjusted, random)."""
    r_accept = _check_real("r_accept", r_accept, 0.0, 1.0)
    r_pa = _check_real("r_pa", r_pa, 0.0, 1.0)
    p_random = 1.0 - r_accept
    p_pitch = r_accept * r_pa
    p_memory = r_accept * (1.0 - r_pa)
    return p_memory, p_pitch, p_random


def pitch_adjust(x_old, b_range, epsilon):
    """``x_old + b_range * epsilon``; clamping is left to the caller."""
    return x_old + b_range * epsilon


def init_memory(objective, hms: int, rng: np.random.Generator) -> HarmonyMemory:
    """Fill a memory with ``hms`` uniform points, each evaluated once.

    ``objective`` must expose ``bounds`` and be callable on a point.
    """
    bounds = objective.bounds
    points = np.empty((hms, bounds.dims))
    values = np.empty(hms)
    for k in range(hms):
        points[k] = uniform_point(bounds, rng)
        values[k] = objective(points[k])
    return HarmonyMemory(points, values, bounds)


def improvise(
    memory: HarmonyMemory,
    r_accept: float,
    r_pa: float,
    b_range,
    rng: np.random.Generator,
    return_branches: bool = False,
):
    """Build one new harmony from ``memory``.

    Branching is decided independently per component, and each component
    picks its own memory member.  All uniforms for one improvisation come
    from a single ``rng.random((5, d))`` call, so the stream consumption does
    not depend on which branches fire.

    Returns the clamped candidate, plus an int array of branch codes
    (MEMORY, PITCH, RANDOM) when ``return_branches`` is set.
    """
    bounds = memory.bounds
    hms, d = memory.points.shape
    u = rng.random((5, d))
    use_memory = u[0] < r_accept
    member = np.minimum((u[1] * hms).astype(np.intp), hms - 1)
    adjust = use_memory & (u[2] < r_pa)
    eps = 2.0 * u[3] - 1.0

    from_memory = memory.points[member, np.arange(d)]
    from_memory = np.where(adjust, pitch_adjust(from_memory, b_range, eps), from_memory)
    fresh = bounds.lower + u[4] * bounds.width
    candidate = clamp(np.where(use_memory, from_memory, fresh), bounds)

    if return_branches:
        branches = np.where(use_memory, np.where(adjust, PITCH, MEMORY), RANDOM)
        return candidate, branches
    return candidate


def hs_step(memory: HarmonyMemory, candidate: EvaluatedSolution) -> bool:
    """Replace the worst member with ``candidate`` if strictly better.

    Mutates ``memory`` in place and returns whether the candidate was accepted.
    """
    worst = memory.worst_index
    if candidate.value < memory.values[worst]:
        memory.points[worst] = candidate.point
        memory.values[worst] = candidate.value
        return True
    return False


class HarmonySearch(BaseOptimizer):
    """Harmony search minimizer.

    Parameters
    ----------
    hms : int, default 20
        Harmony memory size.
    r_accept : float, default 0.95
        Memory considering rate.
    r_pa : float, default 0.7
        Pitch adjusting rate (applied to memory-drawn components).
    b_range : float or array-like, optional
        Pitch bandwidth per dimension, in problem units. Defaults to 5% of
        each dimension's width.
    max_iterations : int, default 15000
        Number of improvisations after the memory is initialized.  Each
        improvisation costs one evaluation.
    random_state : int, optional

    Examples
    --------
    >>> from hsopt.benchmarks import get_benchmark
    >>> hs = HarmonySearch(max_iterations=2000, random_state=1)
    >>> hs.fit(get_benchmark("rosenbrock_log").objective).n_evals_
    2020
    """

    algorithm = "hs"

    def __init__(self, hms=20, r_accept=0.95, r_pa=0.7, b_range=None, max_iterations=15000, random_state=None):
        self.hms = hms
        self.r_accept = r_accept
        self.r_pa = r_pa
        self.b_range = b_range
        self.max_iterations = max_iterations
        self.random_state = random_state

    def _validate_params(self):
        _check_int("hms", self.hms, 2)
        _check_real("r_accept", self.r_accept, 0.0, 1.0)
        _check_real("r_pa", self.r_pa, 0.0, 1.0)
        _check_int("max_iterations", self.max_iterations, 0)

    def _resolve_params(self, bounds):
        return {"b_range": _per_dim("b_range", self.b_range, bounds, DEFAULT_BANDWIDTH_FRACTION)}

    def expected_evals(self):
        return self.hms + self.max_iterations

    def with_budget(self, max_evals):
        if max_evals < self.hms:
            raise ValueError(f"budget {max_evals} is smaller than the memory size {self.hms}")
        return clone(self).set_params(max_iterations=max_evals - self.hms)

    def _minimize(self, tracker, bounds, rng, resolved):
        b_range = resolved["b_range"]
        memory = init_memory(_Logged(tracker, 0), self.hms, rng)
        _iterate(memory, self.r_accept, self.r_pa, b_range, rng, tracker, self.max_iterations)
        self.memory_ = memory


_BLOCK = 1024


def _iterate(memory, r_accept, r_pa, b_range, rng, tracker, n_iter):
    """The improvise/evaluate/replace loop.

    Equivalent to calling :func:`improvise` then :func:`hs_step` ``n_iter``
    times (same draws, same arithmetic), but uniforms are drawn in blocks and
    per-component work is done on Python floats.
    """
    hms, d = memory.points.shape
    bounds = memory.bounds
    lower = bounds.lower.tolist()
    upper = bounds.upper.tolist()
    points = memory.points.tolist()
    values = memory.values.tolist()
    dims = range(d)
    t = 0
    while t < n_iter:
        n = min(_BLOCK, n_iter - t)
        u = rng.random((n, 5, d))
        use_memory = (u[:, 0] < r_accept).tolist()
        member = np.minimum((u[:, 1] * hms).astype(np.intp), hms - 1).tolist()
        adjust = (u[:, 2] < r_pa).tolist()
        step = (b_range * (2.0 * u[:, 3] - 1.0)).tolist()
        fresh = (bounds.lower + u[:, 4] * bounds.width).tolist()
        for k in range(n):
            t += 1
            um, mk, ak, sk, fk = use_memory[k], member[k], adjust[k], step[k], fresh[k]
            x = []
            for i in dims:
                if um[i]:
                    c = points[mk[i]][i]
                    if ak[i]:
                        c = c + sk[i]
                else:
                    c = fk[i]
                x.append(min(upper[i], max(lower[i], c)))
            xa = np.array(x)
            value = tracker.evaluate(xa)
            worst = max(range(hms), key=values.__getitem__)
            accepted = value < values[worst]
            if accepted:
                points[worst] = x
                values[worst] = value
                memory.points[worst] = xa
                memory.values[worst] = value
            tracker.log(t, x, value, accepted)


class _Logged:
    """Objective adapter that logs every initial-memory evaluation as accepted."""

    def __init__(self, tracker, iteration):
        self.tracker = tracker
        self.iteration = iteration
        self.bounds = tracker.objective.bounds

    def __call__(self, point):
        value = self.tracker.evaluate(point)
        self.tracker.log(self.iteration, point, value, True)
        return value


def run_hs(objective, params=None, seed=0, bounds=None):
    """Run harmony search and return ``(RunResult, trace)``.

    ``params`` is a mapping of :class:`HarmonySearch` constructor arguments.
    """
    est = HarmonySearch(**dict(params or {}), random_state=seed)
    est.fit(check_objective(objective, bounds))
    return est.result_, est.trace_
