import math

import numpy as np
import pytest
from scipy.optimize import minimize

from hsopt.benchmarks import BENCHMARKS, BenchmarkSpec, get_benchmark, michalewicz2, rosenbrock_log, sphere
from hsopt.core import Bounds


def test_rosenbrock_log_values():
    assert rosenbrock_log(1.0, 1.0) == 0.0
    assert rosenbrock_log(0.0, 0.0) == pytest.approx(math.log(2), rel=1e-12)
    assert rosenbrock_log(2.0, 4.0) == pytest.approx(math.log(2), rel=1e-12)


def test_rosenbrock_log_positive_off_optimum():
    rng = np.random.default_rng(0)
    for x, y in rng.uniform(-10, 10, size=(2000, 2)):
        assert rosenbrock_log(x, y) > 0


def test_michalewicz2_values():
    assert michalewicz2(2.20319, 1.57049) == pytest.approx(-1.801, abs=5e-3)
    assert michalewicz2(0.0, 0.0) == 0.0
    assert michalewicz2(math.pi, math.pi) == pytest.approx(0.0, abs=1e-9)


def test_michalewicz2_bounded_below_on_grid():
    g = np.linspace(0, math.pi, 201)
    vals = [michalewicz2(x, y) for x in g for y in g]
    assert min(vals) >= -2.0


def test_michalewicz2_printed_form_optimum():
    # grid search then local polish as an independent check of the reference minimum
    g = np.linspace(0, math.pi, 801)
    X, Y = np.meshgrid(g, g)
    Z = -np.sin(X) * np.sin(X**2 / np.pi) ** 20 - np.sin(Y) * np.sin(2 * Y**2 / np.pi) ** 20
    i = np.unravel_index(Z.argmin(), Z.shape)
    res = minimize(lambda v: michalewicz2(*v), [X[i], Y[i]], method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-14})
    assert res.fun == pytest.approx(-1.801, abs=5e-3)
    assert res.fun == pytest.approx(-1.8013034, abs=1e-6)
    assert res.x[1] == pytest.approx(math.pi / 2, abs=1e-5)


def test_sphere():
    assert sphere([0.0, 0.0, 0.0]) == 0.0
    assert sphere([3.0, 4.0]) == 25.0


def test_registry():
    assert set(BENCHMARKS) == {"rosenbrock_log", "michalewicz2", "sphere"}
    for spec in BENCHMARKS.values():
        spec.check()
        assert spec.evaluate(spec.known_optimum_point) == pytest.approx(spec.known_optimum_value, abs=1e-3)
    assert get_benchmark("rosenbrock_log").bounds == Bounds.cube(-10, 10, 2)
    assert get_benchmark("michalewicz2").bounds == Bounds.cube(0, math.pi, 2)


def test_sphere_dims_and_unknown():
    assert get_benchmark("sphere", dims=5).dims == 5
    with pytest.raises(ValueError):
        get_benchmark("rosenbrock_log", dims=3)
    with pytest.raises(KeyError):
        get_benchmark("nope")


def test_inconsistent_spec_rejected():
    bad = BenchmarkSpec("bad", sphere, Bounds.cube(-1, 1, 2), (0.0, 0.0), 1.0)
    with pytest.raises(AssertionError):
        bad.check()
