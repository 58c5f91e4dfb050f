"""Inertia-weight particle swarm optimisation (minimisation).

Each particle is pulled toward its own best point and toward the best
point inside its communication group: the whole swarm (``"global"``) or
``k`` neighbours on each side of a ring (``"ring(k)"``).
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from typing import Callable

import numpy as np


class NonFiniteFitnessError(FloatingPointError):
    def __init__(self, index: int, position: np.ndarray, value: float):
        self.index, self.position, self.value = index, np.array(position), value
        super().__init__(f"particle {index} has non-finite fitness {value!r} "
                         f"at position {np.array2string(np.asarray(position))}")


# ----------------------------------------------------------------------
# Benchmarks
# ----------------------------------------------------------------------
def sphere(x: np.ndarray) -> float:
    return float(np.sum(np.square(x)))


def rastrigin(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def rosenbrock(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


_OBJECTIVES: dict[str, tuple[Callable[[np.ndarray], float], float, float]] = {
    # name: (function, coordinate of the global minimum, default half-width)
    "sphere": (sphere, 0.0, 5.12),
    "rastrigin": (rastrigin, 0.0, 5.12),
    "rosenbrock": (rosenbrock, 1.0, 5.0),
}


@dataclass(frozen=True)
class ObjectiveSpec:
    name: str
    dimensions: int

    def __post_init__(self) -> None:
        if self.name not in _OBJECTIVES:
            raise ValueError(f"unknown objective {self.name!r}; expected one of {sorted(_OBJECTIVES)}")
        if self.dimensions < 1 or (self.name == "rosenbrock" and self.dimensions < 2):
            raise ValueError(f"bad dimensions {self.dimensions!r} for {self.name}")

    def __call__(self, x: np.ndarray) -> float:
        return _OBJECTIVES[self.name][0](x)

    @property
    def minimizer(self) -> np.ndarray:
        return np.full(self.dimensions, _OBJECTIVES[self.name][1])

    @property
    def minimum(self) -> float:
        return 0.0

    def default_bounds(self) -> list[tuple[float, float]]:
        h = _OBJECTIVES[self.name][2]
        return [(-h, h)] * self.dimensions


# ----------------------------------------------------------------------
# Config and swarm state
# ----------------------------------------------------------------------
_RING = re.compile(r"^ring(?:\((\d+)\))?$")


def parse_topology(topology: str) -> int | None:
    """``None`` for the global topology, else the ring half-width ``k``."""
    if topology == "global":
        return None
    m = _RING.match(topology)
    if not m:
        raise ValueError(f"topology must be 'global' or 'ring(k)', got {topology!r}")
    return int(m.group(1)) if m.group(1) is not None else 1


@dataclass(frozen=True)
class PsoConfig:
    n_particles: int = 20
    dimensions: int = 2
    bounds: tuple[tuple[float, float], ...] | None = None   # None: objective default
    inertia: float = 0.729
    c1: float = 1.49445
    c2: float = 1.49445
    topology: str = "global"
    iterations: int = 100

    def __post_init__(self) -> None:
        if self.n_particles < 2:
            raise ValueError(f"n_particles must be >= 2, got {self.n_particles!r}")
        if self.dimensions < 1:
            raise ValueError(f"dimensions must be positive, got {self.dimensions!r}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be positive, got {self.iterations!r}")
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("c1 and c2 must be non-negative")
        parse_topology(self.topology)
        if self.bounds is not None:
            if len(self.bounds) != self.dimensions:
                raise ValueError("bounds must give one interval per dimension")
            for lo, hi in self.bounds:
                if not lo < hi:
                    raise ValueError(f"degenerate bound ({lo}, {hi})")

    def bounds_array(self, objective: ObjectiveSpec | None = None) -> np.ndarray:
        if self.bounds is not None:
            return np.asarray(self.bounds, dtype=float)
        if objective is None:
            raise ValueError("bounds unset and no objective to default from")
        return np.asarray(objective.default_bounds(), dtype=float)


@dataclass
class Swarm:
    """Particle arrays, one row per particle."""

    position: np.ndarray
    velocity: np.ndarray
    best_position: np.ndarray
    best_fitness: np.ndarray

    def __len__(self) -> int:
        return len(self.position)

    def copy(self) -> Swarm:
        return Swarm(self.position.copy(), self.velocity.copy(),
                     self.best_position.copy(), self.best_fitness.copy())


def _evaluate(objective, positions: np.ndarray) -> np.ndarray:
    values = np.array([objective(x) for x in positions], dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        i = int(bad[0])
        raise NonFiniteFitnessError(i, positions[i], values[i])
    return values


def init_swarm(config: PsoConfig, objective, rng: np.random.Generator,
               positions: np.ndarray | None = None) -> Swarm:
    bounds = config.bounds_array(objective if isinstance(objective, ObjectiveSpec) else None)
    lo, hi = bounds[:, 0], bounds[:, 1]
    shape = (config.n_particles, config.dimensions)
    if positions is None:
        x = rng.uniform(lo, hi, shape)
    else:
        x = np.array(positions, dtype=float).reshape(shape)
    span = hi - lo
    v = rng.uniform(-span, span, shape)
    f = _evaluate(objective, x)
    return Swarm(x, v, x.copy(), f)


def neighborhood_best(swarm: Swarm, index: int, topology: str = "global") -> np.ndarray:
    """Best personal-best position in the particle's group; lowest index on ties."""
    n = len(swarm)
    if n == 0:
        raise ValueError("empty swarm")
    if not 0 <= index < n:
        raise IndexError(index)
    k = parse_topology(topology)
    if k is None or 2 * k + 1 >= n:
        members = np.arange(n)
    else:
        members = np.unique((index + np.arange(-k, k + 1)) % n)
    fit = swarm.best_fitness[members]
    return swarm.best_position[members[int(np.argmin(fit))]].copy()


def pso_step(swarm: Swarm, config: PsoConfig, objective, rng) -> Swarm:
    """One synchronous update; returns a new swarm."""
    bounds = config.bounds_array(objective if isinstance(objective, ObjectiveSpec) else None)
    lo, hi = bounds[:, 0], bounds[:, 1]
    x, v = swarm.position, swarm.velocity
    nbest = np.array([neighborhood_best(swarm, i, config.topology) for i in range(len(swarm))])
    r1 = rng.random(x.shape)
    r2 = rng.random(x.shape)
    v = config.inertia * v + config.c1 * r1 * (swarm.best_position - x) + config.c2 * r2 * (nbest - x)
    x = x + v
    out = (x < lo) | (x > hi)
    x = np.clip(x, lo, hi)
    v = np.where(out, 0.0, v)
    f = _evaluate(objective, x)
    better = f < swarm.best_fitness
    pbest = np.where(better[:, None], x, swarm.best_position)
    pfit = np.where(better, f, swarm.best_fitness)
    return Swarm(x, v, pbest, pfit)


@dataclass(frozen=True)
class PsoReport:
    best_position: np.ndarray
    best_fitness: float
    history: tuple[float, ...]   # swarm-best fitness, index 0 = initial swarm

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "best_fitness"])
        for i, f in enumerate(self.history):
            w.writerow([i, repr(f)])
        return buf.getvalue()


def run_pso(config: PsoConfig, objective, seed: int = 0,
            initial_positions: np.ndarray | None = None) -> PsoReport:
    rng = np.random.default_rng(seed)
    swarm = init_swarm(config, objective, rng, initial_positions)
    history = [float(swarm.best_fitness.min())]
    for _ in range(config.iterations):
        swarm = pso_step(swarm, config, objective, rng)
        history.append(float(swarm.best_fitness.min()))
    i = int(np.argmin(swarm.best_fitness))
    return PsoReport(swarm.best_position[i].copy(), float(swarm.best_fitness[i]), tuple(history))


__all__ = [
    "NonFiniteFitnessError", "ObjectiveSpec", "PsoConfig", "PsoReport", "Swarm",
    "init_swarm", "neighborhood_best", "pso_step", "rastrigin", "rosenbrock",
    "run_pso", "sphere",
]
