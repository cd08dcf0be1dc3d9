"""Benchmark battery: 22 single-objective test functions, the convex/sinusoidal
demo objectives, and the ZDT/DTLZ-style multi-objective suite with analytic
Pareto fronts.

All evaluators are pure and total on finite inputs. Where a function has
several circulating transcriptions, the canonical form whose minimum matches
the tabulated optimum is used (see the per-function notes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import DomainError, SearchSpace, ShapeError

PI = np.pi


class UnknownBenchmarkError(KeyError):
    """Benchmark id not present in the catalog."""


# ---------------------------------------------------------------------------
# Single-objective evaluators
# ---------------------------------------------------------------------------

def sphere(x):
    return float(np.sum(x * x))


def sinusoidal(x):
    """Non-convex demo objective sin(x0) + sin(x1), global minimum -2."""
    return float(np.sin(x[0]) + np.sin(x[1]))


def ackley(x):
    d = x.size
    return float(
        -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x * x) / d))
        - np.exp(np.sum(np.cos(2 * PI * x)) / d)
        + 20.0
        + np.e
    )


def bukin_n6(x):
    # absolute values inside both terms keep the surface real-valued
    return float(100.0 * np.sqrt(abs(x[1] - 0.01 * x[0] ** 2)) + 0.01 * abs(x[0] + 10.0))


def rastrigin(x):
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2 * PI * x)))


def cross_in_tray(x):
    inner = abs(np.sin(x[0]) * np.sin(x[1]) * np.exp(abs(100.0 - np.hypot(x[0], x[1]) / PI)))
    return float(-0.0001 * (inner + 1.0) ** 0.1)


def levy_n13(x):
    return float(
        np.sin(3 * PI * x[0]) ** 2
        + (x[0] - 1.0) ** 2 * (1.0 + np.sin(3 * PI * x[1]) ** 2)
        + (x[1] - 1.0) ** 2 * (1.0 + np.sin(2 * PI * x[1]) ** 2)
    )


def eggholder(x):
    a = -(x[1] + 47.0) * np.sin(np.sqrt(abs(x[1] + x[0] / 2.0 + 47.0)))
    b = -x[0] * np.sin(np.sqrt(abs(x[0] - (x[1] + 47.0))))
    return float(a + b)


def schaffer_n2(x):
    num = np.sin(x[0] ** 2 - x[1] ** 2) ** 2 - 0.5
    den = (1.0 + 0.001 * (x[0] ** 2 + x[1] ** 2)) ** 2
    return float(0.5 + num / den)


def schwefel(x):
    return float(418.9829 * x.size - np.sum(x * np.sin(np.sqrt(np.abs(x)))))


def shubert(x):
    i = np.arange(1, 6)
    return float(np.sum(i * np.cos((i + 1) * x[0] + i)) * np.sum(i * np.cos((i + 1) * x[1] + i)))


def drop_wave(x):
    # leading minus: the surface dips to -1 at the origin
    r2 = x[0] ** 2 + x[1] ** 2
    return float(-(1.0 + np.cos(12.0 * np.sqrt(r2))) / (0.5 * r2 + 2.0))


def himmelblau(x):
    return float((x[0] ** 2 + x[1] - 11.0) ** 2 + (x[0] + x[1] ** 2 - 7.0) ** 2)


def booth(x):
    return float((x[0] + 2 * x[1] - 7.0) ** 2 + (2 * x[0] + x[1] - 5.0) ** 2)


def matyas(x):
    return float(0.26 * (x[0] ** 2 + x[1] ** 2) - 0.48 * x[0] * x[1])


def mccormick(x):
    return float(np.sin(x[0] + x[1]) + (x[0] - x[1]) ** 2 - 1.5 * x[0] + 2.5 * x[1] + 1.0)


def three_hump_camel(x):
    return float(2 * x[0] ** 2 - 1.05 * x[0] ** 4 + x[0] ** 6 / 6.0 + x[0] * x[1] + x[1] ** 2)


def six_hump_camel(x):
    return float(
        (4.0 - 2.1 * x[0] ** 2 + x[0] ** 4 / 3.0) * x[0] ** 2
        + x[0] * x[1]
        + (-4.0 + 4.0 * x[1] ** 2) * x[1] ** 2
    )


def rosenbrock(x):
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2))


def dixon_price(x):
    i = np.arange(2, x.size + 1)
    return float((x[0] - 1.0) ** 2 + np.sum(i * (2 * x[1:] ** 2 - x[:-1]) ** 2))


def beale(x):
    return float(
        (1.5 - x[0] + x[0] * x[1]) ** 2
        + (2.25 - x[0] + x[0] * x[1] ** 2) ** 2
        + (2.625 - x[0] + x[0] * x[1] ** 3) ** 2
    )


def goldstein_price(x):
    a = 1.0 + (x[0] + x[1] + 1.0) ** 2 * (
        19.0 - 14.0 * x[0] + 3.0 * x[0] ** 2 - 14.0 * x[1] + 6.0 * x[0] * x[1] + 3.0 * x[1] ** 2
    )
    b = 30.0 + (2.0 * x[0] - 3.0 * x[1]) ** 2 * (
        18.0 - 32.0 * x[0] + 12.0 * x[0] ** 2 + 48.0 * x[1] - 36.0 * x[0] * x[1] + 27.0 * x[1] ** 2
    )
    return float(a * b)


def forrester(x):
    """One-dimensional test curve (6x-2)^2 sin(12x-4) on [0, 1]."""
    return float((6.0 * x[0] - 2.0) ** 2 * np.sin(12.0 * x[0] - 4.0))


def devilliersglasser02(x):
    """Convex 2D quadratic on [1, 60]^2; box-constrained minimum 74 at (1, 1).

    Note this is not the 5D curve-fitting DeVilliersGlasser02 of the wider
    benchmarking literature; it is the 2D quadratic variant used here.
    """
    return float(
        (2.0 * x[0] - 3.0 * x[1]) ** 2
        + 18.0 * x[0]
        - 32.0 * x[1]
        + 12.0 * x[0] ** 2
        + 48.0 * x[1]
        + 27.0 * x[1] ** 2
    )


# ---------------------------------------------------------------------------
# Multi-objective evaluators
# ---------------------------------------------------------------------------

def zdt1(x):
    f1 = x[0]
    g = 1.0 + 9.0 * np.sum(x[1:]) / (x.size - 1)
    f2 = g * (1.0 - np.sqrt(f1 / g))
    return np.array([f1, f2])


def zdt2(x):
    f1 = x[0]
    g = 1.0 + 9.0 * np.sum(x[1:]) / (x.size - 1)
    f2 = g * (1.0 - (f1 / g) ** 2)
    return np.array([f1, f2])


def dltz1(x):
    """Three-objective simplex problem, 2 position + 5 distance variables."""
    tail = x[2:]
    g = 100.0 * (tail.size + np.sum((tail - 0.5) ** 2 - np.cos(20.0 * PI * (tail - 0.5))))
    h = 0.5 * (1.0 + g)
    return np.array([h * x[0] * x[1], h * x[0] * (1.0 - x[1]), h * (1.0 - x[0])])


def mo_demo(x):
    """Bi-objective demo: a sinusoid against a Gaussian bump centred at (5, 5)."""
    return np.array(
        [np.sin(x[0]) + np.cos(x[1]), np.exp(-((x[0] - 5.0) ** 2) - (x[1] - 5.0) ** 2)]
    )


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BenchmarkSpec:
    """Single-objective benchmark: evaluator, bounds, and known optimum."""

    id: str
    fn: Callable
    dim_rule: str                 # "fixed-1d" | "fixed-2d" | "any-n"
    bounds: tuple                 # ((low, high), ...) fixed dims, or ((low, high),) template
    known_optimum: float | None = None
    argmins: tuple = ()
    min_dim: int = 1
    default_dim: int = 2

    def space(self, dim: int | None = None) -> SearchSpace:
        if self.dim_rule == "any-n":
            d = self.default_dim if dim is None else int(dim)
            if d < self.min_dim:
                raise ShapeError(f"{self.id} needs at least {self.min_dim} dimensions")
            lo, hi = self.bounds[0]
            return SearchSpace.cube(lo, hi, d)
        d = len(self.bounds)
        if dim is not None and int(dim) != d:
            raise ShapeError(f"{self.id} is fixed at {d} dimensions")
        return SearchSpace(
            np.array([b[0] for b in self.bounds]), np.array([b[1] for b in self.bounds])
        )

    @property
    def dim(self) -> int:
        return self.default_dim if self.dim_rule == "any-n" else len(self.bounds)

    @property
    def argmin_examples(self) -> list:
        return [np.array(a, dtype=float) for a in self.argmins]

    @property
    def n_objectives(self) -> int:
        return 1

    def evaluate(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.ndim != 1:
            raise ShapeError(f"expected a 1-d vector, got shape {x.shape}")
        if self.dim_rule == "any-n":
            if x.size < self.min_dim:
                raise ShapeError(f"{self.id} needs at least {self.min_dim} dimensions")
        elif x.size != len(self.bounds):
            raise ShapeError(f"{self.id} expects {len(self.bounds)} dimensions, got {x.size}")
        if not np.isfinite(x).all():
            raise DomainError(f"non-finite input to {self.id}")
        return self.fn(x)


@dataclass(frozen=True)
class MultiObjectiveSpec:
    """Multi-objective benchmark with an optional analytic front sampler."""

    id: str
    fn: Callable
    n_vars: int
    n_objectives: int
    bounds: tuple                 # single (low, high) applied to every variable
    front_sampler: Callable | None = None

    def space(self, dim: int | None = None) -> SearchSpace:
        d = self.n_vars if dim is None else int(dim)
        if d < 2:
            raise ShapeError(f"{self.id} needs at least 2 variables")
        lo, hi = self.bounds
        return SearchSpace.cube(lo, hi, d)

    @property
    def dim(self) -> int:
        return self.n_vars

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim != 1 or x.size < 2:
            raise ShapeError(f"expected a 1-d vector of >= 2 variables, got shape {x.shape}")
        if self.id == "dltz1" and x.size != self.n_vars:
            raise ShapeError(f"{self.id} expects {self.n_vars} variables, got {x.size}")
        if not np.isfinite(x).all():
            raise DomainError(f"non-finite input to {self.id}")
        return np.asarray(self.fn(x), dtype=float)


def _zdt1_front(k: int) -> np.ndarray:
    f1 = np.linspace(0.0, 1.0, k)
    return np.column_stack([f1, 1.0 - np.sqrt(f1)])


def _zdt2_front(k: int) -> np.ndarray:
    f1 = np.linspace(0.0, 1.0, k)
    return np.column_stack([f1, 1.0 - f1 ** 2])


def _dltz1_front(k: int) -> np.ndarray:
    # deterministic grid over the simplex parameters; every row sums to 0.5
    m = max(2, math.ceil(math.sqrt(k)))
    us, vs = np.meshgrid(np.linspace(0.0, 1.0, m), np.linspace(0.0, 1.0, m))
    u, v = us.ravel()[:k], vs.ravel()[:k]
    return np.column_stack([0.5 * u * v, 0.5 * u * (1.0 - v), 0.5 * (1.0 - u)])


_HALF_PI = float(PI / 2.0)

SINGLE_OBJECTIVE: dict = {}
MULTI_OBJECTIVE: dict = {}


def _add(spec):
    target = SINGLE_OBJECTIVE if isinstance(spec, BenchmarkSpec) else MULTI_OBJECTIVE
    target[spec.id] = spec


_add(BenchmarkSpec("sphere", sphere, "any-n", ((-10.0, 10.0),), 0.0, ((0.0, 0.0),)))
_add(BenchmarkSpec("sinusoidal", sinusoidal, "fixed-2d", ((-10.0, 10.0), (-10.0, 10.0)),
                   -2.0, ((-_HALF_PI, -_HALF_PI),)))
_add(BenchmarkSpec("ackley", ackley, "any-n", ((-32.768, 32.768),), 0.0, ((0.0, 0.0),)))
_add(BenchmarkSpec("bukin_n6", bukin_n6, "fixed-2d", ((-15.0, -5.0), (-3.0, 3.0)),
                   0.0, ((-10.0, 1.0),)))
_add(BenchmarkSpec("rastrigin", rastrigin, "any-n", ((-5.12, 5.12),), 0.0, ((0.0, 0.0),)))
_add(BenchmarkSpec("cross_in_tray", cross_in_tray, "fixed-2d", ((-10.0, 10.0), (-10.0, 10.0)),
                   -2.06261187082, ((1.3494066, 1.3494066), (1.3494066, -1.3494066),
                                    (-1.3494066, 1.3494066), (-1.3494066, -1.3494066))))
_add(BenchmarkSpec("levy_n13", levy_n13, "fixed-2d", ((-10.0, 10.0), (-10.0, 10.0)),
                   0.0, ((1.0, 1.0),)))
_add(BenchmarkSpec("eggholder", eggholder, "fixed-2d", ((-512.0, 512.0), (-512.0, 512.0)),
                   -959.6407, ((512.0, 404.2319),)))
_add(BenchmarkSpec("schaffer_n2", schaffer_n2, "fixed-2d", ((-100.0, 100.0), (-100.0, 100.0)),
                   0.0, ((0.0, 0.0),)))
_add(BenchmarkSpec("schwefel", schwefel, "any-n", ((-500.0, 500.0),),
                   0.0, ((420.9687, 420.9687),)))
_add(BenchmarkSpec("shubert", shubert, "fixed-2d", ((-10.0, 10.0), (-10.0, 10.0)),
                   -186.7309, ((-1.42512843, -0.80032110),)))
_add(BenchmarkSpec("drop_wave", drop_wave, "fixed-2d", ((-5.12, 5.12), (-5.12, 5.12)),
                   -1.0, ((0.0, 0.0),)))
_add(BenchmarkSpec("himmelblau", himmelblau, "fixed-2d", ((-5.0, 5.0), (-5.0, 5.0)),
                   0.0, ((3.0, 2.0), (-2.805118086952745, 3.131312518250573),
                         (-3.779310253377747, -3.283185991286170),
                         (3.584428340330492, -1.848126526964404))))
_add(BenchmarkSpec("booth", booth, "fixed-2d", ((-10.0, 10.0), (-10.0, 10.0)),
                   0.0, ((1.0, 3.0),)))
_add(BenchmarkSpec("matyas", matyas, "fixed-2d", ((-10.0, 10.0), (-10.0, 10.0)),
                   0.0, ((0.0, 0.0),)))
_add(BenchmarkSpec("mccormick", mccormick, "fixed-2d", ((-1.5, 4.0), (-3.0, 4.0)),
                   -1.9133, ((-0.54719755, -1.54719755),)))
_add(BenchmarkSpec("three_hump_camel", three_hump_camel, "fixed-2d", ((-5.0, 5.0), (-5.0, 5.0)),
                   0.0, ((0.0, 0.0),)))
_add(BenchmarkSpec("six_hump_camel", six_hump_camel, "fixed-2d", ((-3.0, 3.0), (-2.0, 2.0)),
                   -1.0316, ((0.08984201, -0.71265640), (-0.08984201, 0.71265640))))
_add(BenchmarkSpec("rosenbrock", rosenbrock, "any-n", ((-5.0, 10.0),),
                   0.0, ((1.0, 1.0),), min_dim=2))
_add(BenchmarkSpec("dixon_price", dixon_price, "any-n", ((-10.0, 10.0),),
                   0.0, ((1.0, 0.7071067811865476),), min_dim=2))
_add(BenchmarkSpec("beale", beale, "fixed-2d", ((-4.5, 4.5), (-4.5, 4.5)),
                   0.0, ((3.0, 0.5),)))
_add(BenchmarkSpec("goldstein_price", goldstein_price, "fixed-2d", ((-2.0, 2.0), (-2.0, 2.0)),
                   3.0, ((0.0, -1.0),)))
_add(BenchmarkSpec("forrester", forrester, "fixed-1d", ((0.0, 1.0),),
                   -6.020740055767083, ((0.7572487578741974,),)))
_add(BenchmarkSpec("devilliersglasser02", devilliersglasser02, "fixed-2d",
                   ((1.0, 60.0), (1.0, 60.0)), 74.0, ((1.0, 1.0),)))

_add(MultiObjectiveSpec("zdt1", zdt1, 30, 2, (0.0, 1.0), _zdt1_front))
_add(MultiObjectiveSpec("zdt2", zdt2, 30, 2, (0.0, 1.0), _zdt2_front))
_add(MultiObjectiveSpec("dltz1", dltz1, 7, 3, (0.0, 1.0), _dltz1_front))
_add(MultiObjectiveSpec("mo_demo", mo_demo, 2, 2, (-10.0, 10.0), None))

CATALOG: dict = {**SINGLE_OBJECTIVE, **MULTI_OBJECTIVE}

# The 22-function battery: everything single-objective except the two demo objectives.
BATTERY_IDS = tuple(i for i in SINGLE_OBJECTIVE if i not in ("sphere", "sinusoidal"))


def lookup(benchmark_id: str):
    """Fetch a benchmark spec by id, raising with the valid ids on a miss."""
    try:
        return CATALOG[benchmark_id]
    except KeyError:
        raise UnknownBenchmarkError(
            f"unknown benchmark {benchmark_id!r}; valid ids: {', '.join(CATALOG)}"
        ) from None


def evaluate_single(benchmark_id: str, x) -> float:
    spec = lookup(benchmark_id)
    if not isinstance(spec, BenchmarkSpec):
        raise UnknownBenchmarkError(f"{benchmark_id!r} is multi-objective")
    return spec.evaluate(x)


def evaluate_multi(benchmark_id: str, x) -> np.ndarray:
    spec = lookup(benchmark_id)
    if not isinstance(spec, MultiObjectiveSpec):
        raise UnknownBenchmarkError(f"{benchmark_id!r} is single-objective")
    return spec.evaluate(x)


def analytic_front(benchmark_id: str, k: int) -> np.ndarray:
    """k points on the true Pareto front, as a (k, n_objectives) array."""
    spec = lookup(benchmark_id)
    if not isinstance(spec, MultiObjectiveSpec) or spec.front_sampler is None:
        raise UnknownBenchmarkError(f"no analytic front available for {benchmark_id!r}")
    if k < 2:
        raise ShapeError("front sample needs k >= 2")
    return spec.front_sampler(int(k))
