"""Core domain types shared by every other module.

Provides box-bounded search spaces, candidate solutions, populations,
the deterministic random-stream wrapper, and the low-level sampling
primitives (bounded initialization, bound repair, distinct index draws).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ConfigError(ValueError):
    """A run or request was configured with invalid parameters."""


class SpaceError(ValueError):
    """Malformed search-space bounds (mismatched or degenerate)."""


class ShapeError(ValueError):
    """Dimension mismatch between a vector and its expected shape."""


class DomainError(ValueError):
    """A value is non-finite where a finite one is required."""


class StateError(RuntimeError):
    """Operation requires state (e.g. a fitness value) that is unset."""


class RngStream:
    """Deterministic random stream backed by the counter-based Philox generator.

    Identical seeds reproduce identical draw sequences across platforms, and
    ``substream`` splits off statistically independent child streams, so
    batches of seeded runs can execute in any order (or in parallel) without
    perturbing each other.
    """

    def __init__(self, seed: int, path: tuple = ()):
        self.seed = int(seed)
        self.path = tuple(int(p) for p in path)
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=self.path)
        self._gen = np.random.Generator(np.random.Philox(seq))

    def substream(self, *indices: int) -> "RngStream":
        """Independent child stream addressed by one or more integer indices."""
        return RngStream(self.seed, self.path + tuple(indices))

    def random(self, size=None):
        """Uniform draw(s) on [0, 1)."""
        return self._gen.random(size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._gen.uniform(low, high, size)

    def integers(self, low, high=None, size=None):
        return self._gen.integers(low, high, size=size)

    def choice(self, candidates, size=None, replace=True):
        return self._gen.choice(candidates, size=size, replace=replace)

    def __repr__(self):
        return f"RngStream(seed={self.seed}, path={self.path})"


@dataclass(frozen=True)
class SearchSpace:
    """Axis-aligned box of feasible decision vectors."""

    lows: np.ndarray
    highs: np.ndarray

    def __post_init__(self):
        lows = np.atleast_1d(np.asarray(self.lows, dtype=float))
        highs = np.atleast_1d(np.asarray(self.highs, dtype=float))
        if lows.shape != highs.shape or lows.ndim != 1:
            raise SpaceError(f"bounds shapes differ: {lows.shape} vs {highs.shape}")
        if lows.size == 0:
            raise SpaceError("search space needs at least one dimension")
        if not (np.isfinite(lows).all() and np.isfinite(highs).all()):
            raise SpaceError("bounds must be finite")
        if not (lows < highs).all():
            bad = int(np.argmin(highs - lows))
            raise SpaceError(f"lows must be strictly below highs (dimension {bad})")
        object.__setattr__(self, "lows", lows)
        object.__setattr__(self, "highs", highs)

    @classmethod
    def cube(cls, low: float, high: float, dim: int) -> "SearchSpace":
        """Box with the same (low, high) interval in every dimension."""
        return cls(np.full(dim, float(low)), np.full(dim, float(high)))

    @property
    def dim(self) -> int:
        return self.lows.size

    @property
    def widths(self) -> np.ndarray:
        return self.highs - self.lows

    def diagonal(self) -> float:
        """Euclidean length of the box diagonal."""
        return float(np.linalg.norm(self.widths))

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(x.shape == self.lows.shape and (x >= self.lows).all() and (x <= self.highs).all())

    def as_pairs(self) -> list:
        """Bounds as a list of (low, high) tuples, one per dimension."""
        return [(float(lo), float(hi)) for lo, hi in zip(self.lows, self.highs)]


@dataclass
class Candidate:
    """Decision vector with a lazily cached objective value."""

    x: np.ndarray
    fitness: float | None = None

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)

    @property
    def evaluated(self) -> bool:
        return self.fitness is not None


@dataclass
class Population:
    """Ordered collection of candidates at a given generation."""

    members: list = field(default_factory=list)
    generation: int = 0

    @classmethod
    def from_matrix(cls, x: np.ndarray, generation: int = 0) -> "Population":
        return cls([Candidate(row) for row in np.asarray(x, dtype=float)], generation)

    def positions(self) -> np.ndarray:
        """Member vectors stacked into an (n, dim) matrix."""
        return np.array([m.x for m in self.members], dtype=float)

    def fitnesses(self) -> np.ndarray:
        if any(m.fitness is None for m in self.members):
            raise StateError("population contains unevaluated members")
        return np.array([m.fitness for m in self.members], dtype=float)

    def __len__(self) -> int:
        return len(self.members)


def init_population(space: SearchSpace, n: int, rng: RngStream) -> Population:
    """Sample ``n`` candidates uniformly inside the box; fitness left unset.

    Requires n >= 4, the smallest population that supports difference-based
    mutation with distinct non-self indices.
    """
    if n < 4:
        raise ConfigError(f"population size must be >= 4, got {n}")
    x = rng.uniform(space.lows, space.highs, size=(n, space.dim))
    return Population.from_matrix(x)


def clip_to_bounds(x, space: SearchSpace) -> np.ndarray:
    """Clamp every coordinate into the box; in-bounds input passes through."""
    x = np.asarray(x, dtype=float)
    if x.shape != (space.dim,):
        raise ShapeError(f"vector of shape {x.shape} does not match space dim {space.dim}")
    return np.clip(x, space.lows, space.highs)


def distinct_indices(n: int, count: int, exclude, rng: RngStream) -> np.ndarray:
    """Draw ``count`` pairwise-distinct indices in [0, n) avoiding ``exclude``."""
    excluded = {int(e) for e in exclude}
    allowed = np.array([i for i in range(n) if i not in excluded], dtype=int)
    if count > allowed.size:
        raise ConfigError(
            f"cannot draw {count} distinct indices from {n} with {len(excluded)} excluded"
        )
    return rng.choice(allowed, size=count, replace=False)
