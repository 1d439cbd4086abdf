"""Baseline metaheuristics: simulated annealing, a real-coded genetic
algorithm, particle swarm optimization and the firefly algorithm.

They share the estimator interface of :class:`~hsopt.harmony_search.HarmonySearch`
and record one trace entry per objective evaluation.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import clone

from .core import (
    BaseOptimizer,
    _check_int,
    _check_real,
    _per_dim,
    check_objective,
    uniform_point,
)

__all__ = [
    "SimulatedAnnealing",
    "GeneticAlgorithm",
    "ParticleSwarm",
    "Firefly",
    "sa_accept_probability",
    "metropolis_accept",
    "geometric_cooling",
    "relative_fitness",
    "minimization_fitness",
    "pso_update",
    "fa_attractiveness",
    "fa_move",
    "run_sa",
    "run_ga",
    "run_pso",
    "run_fa",
]

_BLOCK = 1024


# ---------------------------------------------------------------------------
# simulated annealing


def sa_accept_probability(delta_e: float, temperature: float, k: float = 1.0) -> float:
    """Boltzmann acceptance probability ``exp(-delta_e / (k T))``, 1 for non-worsening moves."""
    if not temperature > 0:
        raise ValueError(f"temperature must be positive, got {temperature!r}")
    if not k > 0:
        raise ValueError(f"k must be positive, got {k!r}")
    if delta_e <= 0:
        return 1.0
    return min(1.0, math.exp(-delta_e / (k * temperature)))


def metropolis_accept(delta_e, temperature, k, rng) -> bool:
    """Draw one accept/reject decision."""
    return bool(rng.random() < sa_accept_probability(delta_e, temperature, k))


def geometric_cooling(t0: float, alpha: float, t: int) -> float:
    """Temperature ``t0 * alpha**t`` at step ``t``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    return t0 * alpha**t


class SimulatedAnnealing(BaseOptimizer):
    """Single-chain simulated annealing with geometric cooling.

    Proposals add ``step_size * N(0, 1)`` per component and are clamped to the
    box.  ``step_size`` defaults to 10% of each dimension's width.  The trace
    tracks the best point ever seen, not the chain's current state.

    Parameters
    ----------
    t0 : float, default 1.0
    alpha : float, default 0.9995
        Cooling factor in (0, 1).
    k : float, default 1.0
        Boltzmann constant.
    step_size : float or array-like, optional
    max_iterations : int, default 20000
        Proposals after the starting point; each costs one evaluation.
    random_state : int, optional
    """

    algorithm = "sa"

    def __init__(self, t0=1.0, alpha=0.9995, k=1.0, step_size=None, max_iterations=20000, random_state=None):
        self.t0 = t0
        self.alpha = alpha
        self.k = k
        self.step_size = step_size
        self.max_iterations = max_iterations
        self.random_state = random_state

    def _validate_params(self):
        _check_real("t0", self.t0, 0.0, low_open=True)
        _check_real("alpha", self.alpha, 0.0, 1.0, low_open=True, high_open=True)
        _check_real("k", self.k, 0.0, low_open=True)
        _check_int("max_iterations", self.max_iterations, 0)

    def _resolve_params(self, bounds):
        return {"step_size": _per_dim("step_size", self.step_size, bounds, 0.1)}

    def expected_evals(self):
        return 1 + self.max_iterations

    def with_budget(self, max_evals):
        if max_evals < 1:
            raise ValueError("budget must allow the starting evaluation")
        return clone(self).set_params(max_iterations=max_evals - 1)

    def _minimize(self, tracker, bounds, rng, resolved):
        step = resolved["step_size"]
        lower, upper = bounds.lower, bounds.upper
        x = uniform_point(bounds, rng)
        fx = tracker.evaluate(x)
        tracker.log(0, x, fx, True)
        t = 0
        temperature = self.t0
        while t < self.max_iterations:
            n = min(_BLOCK, self.max_iterations - t)
            noise = rng.standard_normal((n, bounds.dims)) * step
            u = rng.random(n).tolist()
            for j in range(n):
                temperature = geometric_cooling(self.t0, self.alpha, t)
                y = np.minimum(upper, np.maximum(lower, x + noise[j]))
                fy = tracker.evaluate(y)
                delta = fy - fx
                if temperature > 0:
                    accepted = u[j] < sa_accept_probability(delta, temperature, self.k)
                else:
                    # temperature underflowed: greedy
                    accepted = delta <= 0
                if accepted:
                    x, fx = y, fy
                t += 1
                tracker.log(t, y, fy, accepted)
        self.final_temperature_ = temperature


# ---------------------------------------------------------------------------
# genetic algorithm


def relative_fitness(values) -> np.ndarray:
    """Normalize strictly positive fitness values so they sum to one."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("need a non-empty 1-D sequence of fitness values")
    if not np.all(np.isfinite(v)) or np.any(v <= 0):
        raise ValueError("fitness values must be finite and strictly positive")
    return v / math.fsum(v.tolist())


def minimization_fitness(objective_values) -> np.ndarray:
    """Map objective values (lower is better) to positive fitness ``1 / (1 + f - min f)``."""
    f = np.asarray(objective_values, dtype=np.float64)
    return 1.0 / (1.0 + (f - f.min()))


class GeneticAlgorithm(BaseOptimizer):
    """Real-coded generational GA with roulette selection and elitism.

    Each generation keeps the ``elite_count`` best individuals unchanged and
    fills the rest with offspring: two roulette-selected parents, single-point
    crossover with probability ``p_c``, then per-component Gaussian mutation
    with probability ``p_m``.  Elites are not re-evaluated, so a generation
    costs ``pop_size - elite_count`` evaluations.

    Parameters
    ----------
    pop_size : int, default 50
    p_c : float, default 0.85
    p_m : float, default 0.05
    mutation_scale : float or array-like, optional
        Standard deviation of the mutation noise; defaults to 1% of each width.
    elite_count : int, default 2
    max_generations : int, default 500
    random_state : int, optional
    """

    algorithm = "ga"

    def __init__(self, pop_size=50, p_c=0.85, p_m=0.05, mutation_scale=None, elite_count=2,
                 max_generations=500, random_state=None):
        self.pop_size = pop_size
        self.p_c = p_c
        self.p_m = p_m
        self.mutation_scale = mutation_scale
        self.elite_count = elite_count
        self.max_generations = max_generations
        self.random_state = random_state

    def _validate_params(self):
        _check_int("pop_size", self.pop_size, 2)
        _check_real("p_c", self.p_c, 0.0, 1.0)
        _check_real("p_m", self.p_m, 0.0, 1.0)
        _check_int("elite_count", self.elite_count, 0)
        if self.elite_count >= self.pop_size:
            raise ValueError("elite_count must be smaller than pop_size")
        _check_int("max_generations", self.max_generations, 0)

    def _resolve_params(self, bounds):
        return {"mutation_scale": _per_dim("mutation_scale", self.mutation_scale, bounds, 0.01)}

    def expected_evals(self):
        return self.pop_size + self.max_generations * (self.pop_size - self.elite_count)

    def with_budget(self, max_evals):
        if max_evals < self.pop_size:
            raise ValueError(f"budget {max_evals} is smaller than the population {self.pop_size}")
        per_gen = self.pop_size - self.elite_count
        return clone(self).set_params(max_generations=(max_evals - self.pop_size) // per_gen)

    def _minimize(self, tracker, bounds, rng, resolved):
        scale = resolved["mutation_scale"]
        n, d = self.pop_size, bounds.dims
        lower, upper = bounds.lower, bounds.upper
        pop = bounds.lower + rng.random((n, d)) * bounds.width
        values = np.empty(n)
        for i in range(n):
            values[i] = tracker.evaluate(pop[i])
            tracker.log(0, pop[i], values[i], True)

        n_children = n - self.elite_count
        for gen in range(1, self.max_generations + 1):
            order = np.argsort(values, kind="stable")
            elite = order[: self.elite_count]
            probs = relative_fitness(minimization_fitness(values))
            n_pairs = (n_children + 1) // 2
            parents = rng.choice(n, size=(n_pairs, 2), p=probs)
            do_cross = rng.random(n_pairs) < self.p_c
            cuts = rng.integers(1, d, size=n_pairs) if d > 1 else np.zeros(n_pairs, dtype=int)
            mutate = rng.random((2 * n_pairs, d)) < self.p_m
            noise = rng.standard_normal((2 * n_pairs, d)) * scale

            children = np.empty((2 * n_pairs, d))
            child_parents = np.empty((2 * n_pairs, 2), dtype=np.intp)
            for k, (a, b) in enumerate(parents):
                ca, cb = pop[a].copy(), pop[b].copy()
                if do_cross[k] and d > 1:
                    c = cuts[k]
                    ca[c:], cb[c:] = pop[b][c:], pop[a][c:]
                children[2 * k], children[2 * k + 1] = ca, cb
                child_parents[2 * k] = child_parents[2 * k + 1] = (a, b)
            children = np.where(mutate, children + noise, children)
            children = np.minimum(upper, np.maximum(lower, children))[:n_children]

            new_pop = np.empty_like(pop)
            new_values = np.empty(n)
            new_pop[: self.elite_count] = pop[elite]
            new_values[: self.elite_count] = values[elite]
            for k in range(n_children):
                v = tracker.evaluate(children[k])
                a, b = child_parents[k]
                # accepted: offspring beats both of its parents
                tracker.log(gen, children[k], v, v < min(values[a], values[b]))
                new_pop[self.elite_count + k] = children[k]
                new_values[self.elite_count + k] = v
            pop, values = new_pop, new_values
        self.population_ = pop
        self.population_values_ = values


# ---------------------------------------------------------------------------
# particle swarm


def pso_update(position, velocity, personal_best, global_best, alpha, beta, rng, bounds=None, v_limit=None):
    """One velocity/position update, attracting toward both bests.

    ``velocity' = velocity + alpha*e1*(global_best - x) + beta*e2*(personal_best - x)``
    and ``x' = x + velocity'`` (clamped to ``bounds`` when given), with ``e1``
    and ``e2`` fresh uniform [0, 1) arrays shaped like ``position``.  Works on
    a single particle or a stacked (n, d) swarm.  ``v_limit`` clips the new
    velocity componentwise before the move.
    """
    x = np.asarray(position, dtype=np.float64)
    e = rng.random((2,) + x.shape)
    v = (
        np.asarray(velocity, dtype=np.float64)
        + alpha * e[0] * (np.asarray(global_best) - x)
        + beta * e[1] * (np.asarray(personal_best) - x)
    )
    if v_limit is not None:
        v = np.clip(v, -v_limit, v_limit)
    x_new = x + v
    if bounds is not None:
        x_new = np.minimum(bounds.upper, np.maximum(bounds.lower, x_new))
    return x_new, v


class ParticleSwarm(BaseOptimizer):
    """Particle swarm optimization without inertia weight.

    Particles start uniformly in the box at rest.  Every iteration all
    particles move synchronously with :func:`pso_update`, are evaluated, and
    personal and global bests update on strict improvement.  ``v_max``
    optionally clips each velocity component to ``v_max * width``; it is off
    by default, and the undamped update then keeps oscillating at the scale
    of the swarm's spread.

    Parameters
    ----------
    swarm_size : int, default 20
    alpha : float, default 1.0
        Global-best learning parameter.
    beta : float, default 1.0
        Personal-best learning parameter.
    v_max : float, optional
        Velocity limit as a fraction of each dimension's width.
    max_iterations : int, default 1000
    random_state : int, optional
    """

    algorithm = "pso"

    def __init__(self, swarm_size=20, alpha=1.0, beta=1.0, v_max=None, max_iterations=1000, random_state=None):
        self.swarm_size = swarm_size
        self.alpha = alpha
        self.beta = beta
        self.v_max = v_max
        self.max_iterations = max_iterations
        self.random_state = random_state

    def _validate_params(self):
        _check_int("swarm_size", self.swarm_size, 1)
        _check_real("alpha", self.alpha, 0.0)
        _check_real("beta", self.beta, 0.0)
        if self.v_max is not None:
            _check_real("v_max", self.v_max, 0.0, low_open=True)
        _check_int("max_iterations", self.max_iterations, 0)

    def expected_evals(self):
        return self.swarm_size * (1 + self.max_iterations)

    def with_budget(self, max_evals):
        if max_evals < self.swarm_size:
            raise ValueError(f"budget {max_evals} is smaller than the swarm {self.swarm_size}")
        return clone(self).set_params(max_iterations=max_evals // self.swarm_size - 1)

    def _minimize(self, tracker, bounds, rng, resolved):
        n = self.swarm_size
        x = bounds.lower + rng.random((n, bounds.dims)) * bounds.width
        v = np.zeros_like(x)
        fx = np.empty(len(x))
        for i, p in enumerate(x):
            fx[i] = tracker.evaluate(p)
            tracker.log(0, p, fx[i], True)
        pbest, pbest_f = x.copy(), fx.copy()
        g = int(np.argmin(pbest_f))
        vlim = None if self.v_max is None else self.v_max * bounds.width
        for t in range(1, self.max_iterations + 1):
            x, v = pso_update(x, v, pbest, pbest[g], self.alpha, self.beta, rng, bounds, vlim)
            for i in range(n):
                f = tracker.evaluate(x[i])
                improved = f < pbest_f[i]
                if improved:
                    pbest[i] = x[i]
                    pbest_f[i] = f
                tracker.log(t, x[i], f, improved)
            g = int(np.argmin(pbest_f))
        self.global_best_ = pbest[g].copy()


# ---------------------------------------------------------------------------
# firefly algorithm


def fa_attractiveness(beta: float, gamma: float, r) -> float:
    """``beta * exp(-gamma * r**2)``."""
    if np.any(np.asarray(r) < 0):
        raise ValueError("distance must be non-negative")
    return beta * np.exp(-gamma * np.square(r))


def fa_move(positions, values, alpha, beta, gamma, rng, bounds=None, epsilon2=1.0):
    """One firefly iteration; returns the new positions.

    Firefly ``i`` moves toward every firefly ``j`` that was brighter (lower
    objective value) at the start of the iteration, in index order, by
    ``fa_attractiveness(beta, gamma, |x_i - x_j|) * epsilon2 * (x_j - x_i)``,
    then takes a random step ``alpha * e1 * width`` with ``e1`` uniform in
    [-0.5, 0.5) per component.  Partner positions are those at the start of
    the iteration.  ``width`` is 1 when ``bounds`` is None.
    """
    old = np.asarray(positions, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    x = old.copy()
    for j in range(old.shape[0]):
        dimmer = np.flatnonzero(values > values[j])
        if dimmer.size == 0:
            continue
        diff = old[j] - x[dimmer]
        r2 = np.einsum("ij,ij->i", diff, diff)
        # fa_attractiveness(beta, gamma, sqrt(r2)) without the sqrt round trip
        x[dimmer] += (beta * np.exp(-gamma * r2) * epsilon2)[:, None] * diff
    e1 = rng.random(old.shape) - 0.5
    width = 1.0 if bounds is None else bounds.width
    x = x + alpha * e1 * width
    if bounds is not None:
        x = np.minimum(bounds.upper, np.maximum(bounds.lower, x))
    return x


class Firefly(BaseOptimizer):
    """Firefly algorithm; brightness is the negated objective.

    Each iteration applies :func:`fa_move` to the whole population and then
    evaluates every firefly once, so an iteration costs ``pop_size``
    evaluations.

    Parameters
    ----------
    pop_size : int, default 25
    alpha : float, default 0.01
        Random-walk scale, relative to each dimension's width.
    beta : float, default 1.0
        Attractiveness at zero distance.
    gamma : float, default 1.0
        Light absorption coefficient.
    max_iterations : int, default 1000
    random_state : int, optional
    """

    algorithm = "fa"

    def __init__(self, pop_size=25, alpha=0.01, beta=1.0, gamma=1.0, max_iterations=1000, random_state=None):
        self.pop_size = pop_size
        self.alpha = alpha
        self.beta = beta
        self.gamma = gamma
        self.max_iterations = max_iterations
        self.random_state = random_state

    def _validate_params(self):
        _check_int("pop_size", self.pop_size, 2)
        _check_real("alpha", self.alpha, 0.0)
        _check_real("beta", self.beta, 0.0)
        _check_real("gamma", self.gamma, 0.0)
        _check_int("max_iterations", self.max_iterations, 0)

    def expected_evals(self):
        return self.pop_size * (1 + self.max_iterations)

    def with_budget(self, max_evals):
        if max_evals < self.pop_size:
            raise ValueError(f"budget {max_evals} is smaller than the population {self.pop_size}")
        return clone(self).set_params(max_iterations=max_evals // self.pop_size - 1)

    def _minimize(self, tracker, bounds, rng, resolved):
        x = bounds.lower + rng.random((self.pop_size, bounds.dims)) * bounds.width
        fx = np.empty(len(x))
        for i, p in enumerate(x):
            fx[i] = tracker.evaluate(p)
            tracker.log(0, p, fx[i], True)
        for t in range(1, self.max_iterations + 1):
            x = fa_move(x, fx, self.alpha, self.beta, self.gamma, rng, bounds)
            new_f = np.empty_like(fx)
            for i in range(self.pop_size):
                new_f[i] = tracker.evaluate(x[i])
                # accepted: the firefly got brighter than before its move
                tracker.log(t, x[i], new_f[i], new_f[i] < fx[i])
            fx = new_f
        self.population_ = x
        self.population_values_ = fx


def _runner(cls):
    def run(objective, params=None, seed=0, bounds=None):
        est = cls(**dict(params or {}), random_state=seed)
        est.fit(check_objective(objective, bounds))
        return est.result_, est.trace_

    run.__name__ = f"run_{cls.algorithm}"
    run.__doc__ = f"Run :class:`{cls.__name__}` and return ``(RunResult, trace)``."
    return run


run_sa = _runner(SimulatedAnnealing)
run_ga = _runner(GeneticAlgorithm)
run_pso = _runner(ParticleSwarm)
run_fa = _runner(Firefly)
