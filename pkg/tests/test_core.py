import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from hsopt.core import (
    BudgetExceededError,
    Bounds,
    CountingObjective,
    EvaluatedSolution,
    Objective,
    ObjectiveError,
    check_objective,
    clamp,
    make_rng,
    spawn_rngs,
    uniform_point,
)


@pytest.mark.parametrize(
    "point, lower, upper, expected",
    [
        ([5.0], [0.0], [1.0], [1.0]),
        ([0.5], [0.0], [1.0], [0.5]),
        ([-3.2, 0.0], [-1.0, -1.0], [1.0, 1.0], [-1.0, 0.0]),
    ],
)
def test_clamp_examples(point, lower, upper, expected):
    assert clamp(point, Bounds(lower, upper)).tolist() == expected


def test_clamp_errors():
    b = Bounds([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(ValueError, match="components"):
        clamp([0.5], b)
    with pytest.raises(ValueError, match="NaN"):
        clamp([0.5, math.nan], b)


finite = st.floats(-1e6, 1e6, allow_nan=False)


@given(arrays(np.float64, 3, elements=st.floats(-1e9, 1e9, allow_nan=False)))
def test_clamp_idempotent_and_inside(x):
    b = Bounds([-1.0, 0.0, 5.0], [1.0, 2.0, 6.0])
    once = clamp(x, b)
    assert np.array_equal(clamp(once, b), once)
    assert b.contains(once)


@pytest.mark.parametrize(
    "lower, upper",
    [([0.0, 0.0], [0.0, 0.0]), ([1.0], [0.0]), ([0.0, 0.0], [1.0]), ([], []), ([0.0], [math.inf])],
)
def test_bounds_invalid(lower, upper):
    with pytest.raises(ValueError):
        Bounds(lower, upper)


def test_bounds_helpers():
    b = Bounds.from_pairs([(-10, 10), (0, 1)])
    assert b.dims == 2
    assert b.width.tolist() == [20.0, 1.0]
    assert b == Bounds.from_pairs(b.to_list())
    assert not b.lower.flags.writeable


def test_uniform_point_range():
    rng = make_rng(5)
    b = Bounds([-1.0], [1.0])
    pts = np.array([uniform_point(b, rng) for _ in range(2000)])
    assert pts.min() >= -1.0 and pts.max() <= 1.0


def test_uniform_point_mean():
    # LLN: 3 sigma of the mean of 1e5 U(0,1) draws is 3/sqrt(12)/sqrt(1e5) ~ 0.0027
    rng = make_rng(2024)
    b = Bounds([0.0], [1.0])
    draws = np.array([uniform_point(b, rng)[0] for _ in range(100_000)])
    assert abs(draws.mean() - 0.5) < 0.01


def test_rng_determinism_and_seed_checks():
    a = make_rng(123).random(10)
    b = make_rng(123).random(10)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, make_rng(124).random(10))
    make_rng(2**64 - 1)
    with pytest.raises(ValueError):
        make_rng(2**64)
    with pytest.raises(ValueError):
        make_rng(-1)
    with pytest.raises(TypeError):
        make_rng(1.5)


def test_spawn_rngs_independent_and_reproducible():
    s1 = [g.random() for g in spawn_rngs(7, 3)]
    s2 = [g.random() for g in spawn_rngs(7, 3)]
    assert s1 == s2 and len(set(s1)) == 3


def test_counting_objective():
    obj = CountingObjective(Objective(lambda p: float(p[0]), Bounds([0.0], [1.0]), "x"), max_evals=2)
    assert obj([0.25]) == 0.25
    obj([0.5])
    assert obj.count == 2
    with pytest.raises(BudgetExceededError):
        obj([0.5])


def test_nan_objective_names_point():
    obj = CountingObjective(Objective(lambda p: math.nan, Bounds([0.0], [1.0]), "bad"))
    with pytest.raises(ObjectiveError, match=r"\[0\.3\]"):
        obj([0.3])


def test_evaluated_solution_consistent():
    f = Objective(lambda p: float(np.sum(p)), Bounds.cube(0, 1, 2))
    sol = EvaluatedSolution.evaluate(f, [0.25, 0.5])
    assert sol.value == f(sol.point) == 0.75
    assert not sol.point.flags.writeable


def test_check_objective():
    with pytest.raises(ValueError, match="bounds"):
        check_objective(lambda p: 0.0)
    obj = check_objective(lambda p: 0.0, [(0, 1)])
    assert obj.bounds.dims == 1
