"""Benchmark objectives with their search domains and known optima."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import Bounds, Objective

__all__ = [
    "rosenbrock_log",
    "michalewicz2",
    "sphere",
    "BenchmarkSpec",
    "BENCHMARKS",
    "get_benchmark",
    "register",
    "check_registry",
]


def rosenbrock_log(x: float, y: float) -> float:
    """Logarithmic banana: ``ln(1 + (1-x)^2 + 100 (y - x^2)^2)``. Minimum 0 at (1, 1)."""
    return math.log1p((1.0 - x) ** 2 + 100.0 * (y - x * x) ** 2)


def michalewicz2(x: float, y: float) -> float:
    # second term uses 2*y^2/pi, not the usual i*x_i^2/pi with i=2 applied to y alone
    return -math.sin(x) * math.sin(x * x / math.pi) ** 20 - math.sin(y) * math.sin(
        2.0 * y * y / math.pi
    ) ** 20


def sphere(point) -> float:
    p = np.asarray(point, dtype=np.float64)
    return float(np.dot(p, p))


@dataclass(frozen=True)
class BenchmarkSpec:
    name: str
    func: Callable[[np.ndarray], float]
    bounds: Bounds
    known_optimum_point: tuple[float, ...] | None = None
    known_optimum_value: float | None = None

    @property
    def dims(self) -> int:
        return self.bounds.dims

    @property
    def objective(self) -> Objective:
        return Objective(self.func, self.bounds, self.name)

    def evaluate(self, point) -> float:
        return float(self.func(np.asarray(point, dtype=np.float64)))

    def check(self, tol: float = 1e-3) -> None:
        """Raise if the registered optimum does not evaluate to the registered value."""
        if self.known_optimum_point is None or self.known_optimum_value is None:
            return
        got = self.evaluate(self.known_optimum_point)
        if abs(got - self.known_optimum_value) > tol:
            raise AssertionError(
                f"{self.name}: f({self.known_optimum_point}) = {got}, "
                f"expected {self.known_optimum_value} +/- {tol}"
            )


def _xy(f):
    def wrapped(p):
        return f(float(p[0]), float(p[1]))

    wrapped.__name__ = f.__name__
    return wrapped


BENCHMARKS: dict[str, BenchmarkSpec] = {}


def register(spec: BenchmarkSpec) -> BenchmarkSpec:
    spec.check()
    BENCHMARKS[spec.name] = spec
    return spec


register(
    BenchmarkSpec(
        "rosenbrock_log",
        _xy(rosenbrock_log),
        Bounds.cube(-10.0, 10.0, 2),
        (1.0, 1.0),
        0.0,
    )
)
# reference location/value; the printed formula gives -1.80130 at (2.20291, pi/2)
register(
    BenchmarkSpec(
        "michalewicz2",
        _xy(michalewicz2),
        Bounds.cube(0.0, math.pi, 2),
        (2.20319, 1.57049),
        -1.801,
    )
)
register(
    BenchmarkSpec(
        "sphere",
        sphere,
        Bounds.cube(-5.12, 5.12, 2),
        (0.0, 0.0),
        0.0,
    )
)


def get_benchmark(name: str, dims: int | None = None) -> BenchmarkSpec:
    """Look up a registered benchmark. ``dims`` only applies to ``sphere``."""
    try:
        spec = BENCHMARKS[name]
    except KeyError:
        raise KeyError(f"unknown benchmark {name!r}; choose from {sorted(BENCHMARKS)}") from None
    if dims is not None and dims != spec.dims:
        if name != "sphere":
            raise ValueError(f"{name} is fixed at {spec.dims} dimensions")
        spec = BenchmarkSpec(
            "sphere", sphere, Bounds.cube(-5.12, 5.12, dims), (0.0,) * dims, 0.0
        )
    return spec


def check_registry() -> None:
    for spec in BENCHMARKS.values():
        spec.check()
