"""Closed-form oracle checks for every module, runnable without pytest.

``run_selftest()`` executes each registered check and reports pass/fail; the
``hsopt selftest`` command prints the report.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from . import baselines as bl
from . import benchmarks as bm
from . import harmony_search as hs
from . import music
from .core import Bounds, clamp, make_rng, uniform_point

CHECKS: list[tuple[str, Callable[[], None]]] = []

REL = 1e-6


def check(name):
    def deco(fn):
        CHECKS.append((name, fn))
        return fn

    return deco


def close(got, want, rel=REL, abs_tol=1e-12):
    if not math.isclose(got, want, rel_tol=rel, abs_tol=abs_tol):
        raise AssertionError(f"got {got!r}, expected {want!r}")


def raises(exc, fn, *args):
    try:
        fn(*args)
    except exc:
        return
    raise AssertionError(f"{fn.__name__}{args} did not raise {exc.__name__}")


# core ----------------------------------------------------------------------

@check("core.clamp saturates")
def _():
    assert clamp([5.0], Bounds([0.0], [1.0])).tolist() == [1.0]


@check("core.clamp identity inside bounds")
def _():
    assert clamp([0.5], Bounds([0.0], [1.0])).tolist() == [0.5]


@check("core.clamp per component")
def _():
    assert clamp([-3.2, 0.0], Bounds([-1.0, -1.0], [1.0, 1.0])).tolist() == [-1.0, 0.0]


@check("core.clamp rejects NaN and dimension mismatch")
def _():
    b = Bounds([0.0], [1.0])
    raises(ValueError, clamp, [math.nan], b)
    raises(ValueError, clamp, [0.1, 0.2], b)


@check("core.Bounds rejects lower == upper")
def _():
    raises(ValueError, Bounds, [0.0, 0.0], [0.0, 0.0])


@check("core.uniform_point stays in range")
def _():
    rng = make_rng(0)
    b = Bounds([-1.0], [1.0])
    for _ in range(1000):
        assert b.contains(uniform_point(b, rng))


# harmony search --------------------------------------------------------------

@check("hs.branch_probabilities r_accept=0.95 r_pa=0.7")
def _():
    mem, pitch, rand = hs.branch_probabilities(0.95, 0.7)
    close(rand, 0.05)
    close(pitch, 0.665)
    close(mem, 0.285)


@check("hs.branch_probabilities pure memory")
def _():
    assert hs.branch_probabilities(1.0, 0.0) == (1.0, 0.0, 0.0)


@check("hs.branch_probabilities pure random")
def _():
    assert hs.branch_probabilities(0.0, 0.5) == (0.0, 0.0, 1.0)


@check("hs.pitch_adjust substitution")
def _():
    close(hs.pitch_adjust(1.0, 0.1, 0.5), 1.05)
    assert hs.pitch_adjust(3.7, 0.2, 0.0) == 3.7
    close(hs.pitch_adjust(2.0, 0.2, -1.0), 1.8)


@check("hs.init_memory constant objective")
def _():
    from .core import CountingObjective, Objective

    obj = CountingObjective(Objective(lambda p: 7.0, Bounds.cube(-1, 1, 2)))
    mem = hs.init_memory(obj, 2, make_rng(1))
    assert mem.values.tolist() == [7.0, 7.0]
    assert mem.best_index in (0, 1) and mem.worst_index in (0, 1)
    assert obj.count == 2


@check("hs.hs_step rejection, replacement and ties")
def _():
    from .core import EvaluatedSolution

    b = Bounds.cube(0, 10, 1)
    mem = hs.HarmonyMemory([[1.0], [2.0], [3.0]], [1.0, 2.0, 3.0], b)
    assert not hs.hs_step(mem, EvaluatedSolution(np.array([9.0]), 9.0))
    assert mem.values.tolist() == [1.0, 2.0, 3.0]
    assert not hs.hs_step(mem, EvaluatedSolution(np.array([9.0]), 3.0))
    assert hs.hs_step(mem, EvaluatedSolution(np.array([0.5]), 0.5))
    assert mem.values[mem.best_index] == 0.5 and sorted(mem.values.tolist()) == [0.5, 1.0, 2.0]


@check("hs.run with zero iterations returns best initial member")
def _():
    est = hs.HarmonySearch(max_iterations=0, random_state=3).fit(bm.get_benchmark("rosenbrock_log").objective)
    assert est.n_evals_ == 20
    assert est.best_value_ == est.memory_.values.min()


# baselines -----------------------------------------------------------------

@check("sa.accept_probability values")
def _():
    assert bl.sa_accept_probability(0.0, 3.0, 1.0) == 1.0
    close(bl.sa_accept_probability(2.5, 2.5, 1.0), math.exp(-1.0))
    close(bl.sa_accept_probability(1.0, 1.0, 1.0), 0.36787944117144233)
    assert bl.sa_accept_probability(-5.0, 1.0, 1.0) == 1.0
    raises(ValueError, bl.sa_accept_probability, 1.0, 0.0, 1.0)


@check("sa.geometric_cooling values")
def _():
    assert bl.geometric_cooling(100.0, 0.9, 0) == 100.0
    close(bl.geometric_cooling(100.0, 0.9, 2), 81.0)
    temps = [bl.geometric_cooling(100.0, 0.9, t) for t in range(200)]
    assert all(b < a for a, b in zip(temps, temps[1:])) and temps[-1] > 0


@check("ga.relative_fitness normalization")
def _():
    assert bl.relative_fitness([1, 1, 1, 1]).tolist() == [0.25] * 4
    assert bl.relative_fitness([1, 3]).tolist() == [0.25, 0.75]
    close(float(bl.relative_fitness([0.3, 2.0, 7.1, 0.01]).sum()), 1.0, rel=1e-15)
    raises(ValueError, bl.relative_fitness, [1.0, 0.0])


@check("ga default rates lie in the recommended bands")
def _():
    ga = bl.GeneticAlgorithm()
    assert ga.p_c == 0.85 and 0.7 <= ga.p_c <= 0.99
    assert ga.p_m == 0.05 and 0.001 <= ga.p_m <= 0.1


@check("pso.update null, zero-attraction and ballistic cases")
def _():
    rng = make_rng(0)
    x, v = np.array([1.0, 2.0]), np.zeros(2)
    x1, v1 = bl.pso_update(x, v, [5.0, 5.0], [9.0, 9.0], 0.0, 0.0, rng)
    assert x1.tolist() == x.tolist()
    x2, v2 = bl.pso_update(x, np.array([0.3, -0.1]), x, x, 2.0, 2.0, rng)
    assert v2.tolist() == [0.3, -0.1]
    x3, _ = bl.pso_update(x, np.array([0.5, -0.5]), [0, 0], [0, 0], 0.0, 0.0, rng)
    assert x3.tolist() == [1.5, 1.5]


@check("fa.attractiveness limits")
def _():
    assert bl.fa_attractiveness(2.0, 1.0, 0.0) == 2.0
    assert bl.fa_attractiveness(1.0, 0.0, 123.0) == 1.0
    assert bl.fa_attractiveness(1.0, 1e6, 1.0) < 1e-300


@check("fa.move full-strength attraction lands on the brighter firefly")
def _():
    pos = np.array([[0.0, 0.0], [3.0, -4.0]])
    new = bl.fa_move(pos, [1.0, 0.0], 0.0, 1.0, 0.0, make_rng(0))
    assert new[0].tolist() == [3.0, -4.0] and new[1].tolist() == [3.0, -4.0]


# benchmarks ----------------------------------------------------------------

@check("bench.rosenbrock_log values")
def _():
    assert bm.rosenbrock_log(1.0, 1.0) == 0.0
    close(bm.rosenbrock_log(0.0, 0.0), math.log(2.0))
    close(bm.rosenbrock_log(2.0, 4.0), math.log(2.0))


@check("bench.michalewicz2 values")
def _():
    close(bm.michalewicz2(2.20319, 1.57049), -1.801, rel=0, abs_tol=5e-3)
    assert bm.michalewicz2(0.0, 0.0) == 0.0
    close(bm.michalewicz2(math.pi, math.pi), 0.0, rel=0, abs_tol=1e-9)


@check("bench.sphere values")
def _():
    assert bm.sphere([0.0, 0.0]) == 0.0
    assert bm.sphere([3.0, 4.0]) == 25.0


@check("bench.registry self-consistency")
def _():
    bm.check_registry()


# music ---------------------------------------------------------------------

@check("music.freq_to_pitch values")
def _():
    close(music.freq_to_pitch(440.0), 69.0)
    close(music.freq_to_pitch(880.0), 81.0)
    close(music.freq_to_pitch(110.0), 45.0)
    raises(ValueError, music.freq_to_pitch, 0.0)


@check("music.pitch_to_freq values and roundtrip")
def _():
    close(music.pitch_to_freq(69.0), 440.0)
    close(music.pitch_to_freq(81.0), 880.0)
    for f in (55.0, 261.63, 1000.0):
        close(music.pitch_to_freq(music.freq_to_pitch(f)), f, rel=1e-9)


@check("music.wavelength values")
def _():
    close(music.wavelength(440.0, 20.0), 0.7795, rel=0, abs_tol=1e-3)
    close(music.wavelength(343.0, 20.0), 1.0)
    close(music.wavelength(440.0, 0.0), 331.0 / 440.0)
    raises(ValueError, music.wavelength, -1.0, 20.0)
    raises(ValueError, music.wavelength, 440.0, -600.0)


class CheckResult(NamedTuple):
    name: str
    passed: bool
    message: str


def run_selftest() -> list[CheckResult]:
    out = []
    for name, fn in CHECKS:
        try:
            fn()
        except Exception as exc:
            out.append(CheckResult(name, False, f"{type(exc).__name__}: {exc}"))
        else:
            out.append(CheckResult(name, True, ""))
    return out
