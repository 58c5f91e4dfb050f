"""Pheromone update rules and probabilistic edge selection.

The scalar update rules (evaporation, aging, smoothing, clamping) are
plain functions of floats. Edge selection combines per-edge pheromone
``tau`` with the heuristic desirability ``eta = 1 / cost`` as
``tau**alpha * eta**beta`` normalised over a node's outgoing edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

Edge = tuple[str, str]

TAU_MAX_DEFAULT = 100.0
PATH_SEP = "-"


class DeadEndError(ValueError):
    """Raised when a node has no outgoing edge to choose from."""


class UnknownNodeError(KeyError):
    """Raised when a node id is not part of the graph."""


# ----------------------------------------------------------------------
# Scalar update rules
# ----------------------------------------------------------------------
def _check_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


def evaporation_update(tau: float, p: float) -> float:
    """Discount a pheromone value by the evaporation rate: ``tau * (1 - p)``."""
    _check_finite("tau", tau)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p!r}")
    if tau < 0.0:
        raise ValueError(f"tau must be non-negative, got {tau!r}")
    return tau * (1.0 - p)


def aging_deposit(agefactor: float, hops: int) -> float:
    """Amount deposited by an ant that travelled ``hops`` edges."""
    if not 0.0 < agefactor <= 1.0:
        raise ValueError(f"agefactor must be in (0, 1], got {agefactor!r}")
    if int(hops) != hops or hops < 0:
        raise ValueError(f"hops must be a non-negative integer, got {hops!r}")
    return agefactor ** int(hops)


def smoothing_update(tau_old: float, delta: float, tau_max: float) -> float:
    """Bounded reinforcement ``tau_old + delta * (tau_max - tau_old)``.

    The increment shrinks as ``tau_old`` approaches ``tau_max``, which is
    a fixed point.
    """
    _check_finite("tau_old", tau_old)
    _check_finite("tau_max", tau_max)
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0, 1), got {delta!r}")
    if tau_max <= 0.0:
        raise ValueError(f"tau_max must be positive, got {tau_max!r}")
    if tau_old < 0.0:
        raise ValueError(f"tau_old must be non-negative, got {tau_old!r}")
    if tau_old > tau_max:
        raise ValueError(f"tau_old={tau_old!r} exceeds tau_max={tau_max!r}")
    return tau_old + delta * (tau_max - tau_old)


def clamp_pheromone(tau: float, tau_min: float, tau_max: float) -> float:
    if tau_min > tau_max:
        raise ValueError(f"tau_min={tau_min!r} exceeds tau_max={tau_max!r}")
    return min(tau_max, max(tau_min, tau))


# ----------------------------------------------------------------------
# Data types
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class ControlParams:
    """Weights and rates shared by the pheromone rules."""

    p: float = 0.1          # evaporation rate (listing keeps 0.9 per pass)
    agefactor: float = 0.9
    delta: float = 0.33     # smoothing constant
    alpha: float = 1.0      # pheromone weight
    beta: float = 1.0       # heuristic weight

    def __post_init__(self) -> None:
        checks = {
            "p": (0.0 <= self.p <= 1.0, "[0, 1]"),
            "agefactor": (0.0 < self.agefactor <= 1.0, "(0, 1]"),
            "delta": (0.0 < self.delta < 1.0, "(0, 1)"),
            "alpha": (self.alpha >= 0.0, ">= 0"),
            "beta": (self.beta >= 0.0, ">= 0"),
        }
        for name, (ok, legal) in checks.items():
            value = getattr(self, name)
            if not ok or not math.isfinite(value):
                raise ValueError(f"{name} must be in {legal}, got {value!r}")


@dataclass(frozen=True)
class GraphSpec:
    """Directed graph with positive edge costs.

    Node ids are strings and may not contain the path separator ``-`` so
    that joined paths stay unambiguous.
    """

    nodes: tuple[str, ...]
    costs: Mapping[Edge, float]
    _out: dict[str, tuple[Edge, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise ValueError("duplicate node ids")
        for n in self.nodes:
            if not n or PATH_SEP in n or any(c.isspace() for c in n):
                raise ValueError(f"invalid node id {n!r}")
        out: dict[str, list[Edge]] = {n: [] for n in self.nodes}
        for (a, b), cost in self.costs.items():
            if a not in node_set or b not in node_set:
                raise ValueError(f"edge ({a}, {b}) names an undeclared node")
            if not (math.isfinite(cost) and cost > 0.0):
                raise ValueError(f"edge ({a}, {b}) cost must be positive, got {cost!r}")
            out[a].append((a, b))
        object.__setattr__(self, "costs", dict(self.costs))
        object.__setattr__(self, "_out", {n: tuple(e) for n, e in out.items()})

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str, float]],
                   nodes: Sequence[str] | None = None) -> GraphSpec:
        costs: dict[Edge, float] = {}
        seen: list[str] = []
        for a, b, c in edges:
            a, b = str(a), str(b)
            if (a, b) in costs:
                raise ValueError(f"duplicate edge ({a}, {b})")
            costs[(a, b)] = float(c)
            for n in (a, b):
                if n not in seen:
                    seen.append(n)
        if nodes is None:
            nodes = seen
        return cls(tuple(str(n) for n in nodes), costs)

    @property
    def edges(self) -> list[Edge]:
        return list(self.costs)

    def out_edges(self, node: str) -> tuple[Edge, ...]:
        try:
            return self._out[node]
        except KeyError:
            raise UnknownNodeError(f"unknown node {node!r}") from None

    def eta(self, edge: Edge) -> float:
        return 1.0 / self.costs[edge]

    def path_cost(self, path: Sequence[str]) -> float:
        return sum(self.costs[(a, b)] for a, b in zip(path[:-1], path[1:]))


@dataclass(frozen=True)
class PheromoneStore:
    """Per-edge pheromone levels with bounds ``[tau_min, tau_max]``."""

    tau: Mapping[Edge, float]
    tau_max: float = TAU_MAX_DEFAULT
    tau_min: float = 0.0

    def __post_init__(self) -> None:
        if not (self.tau_max > 0.0 and 0.0 <= self.tau_min <= self.tau_max):
            raise ValueError(f"invalid bounds [{self.tau_min}, {self.tau_max}]")
        for e, t in self.tau.items():
            if not math.isfinite(t) or t < 0.0:
                raise ValueError(f"pheromone on {e} must be finite and >= 0, got {t!r}")
        object.__setattr__(self, "tau", dict(self.tau))

    @classmethod
    def uniform(cls, graph: GraphSpec, value: float = 1.0,
                tau_max: float = TAU_MAX_DEFAULT, tau_min: float = 0.0) -> PheromoneStore:
        return cls({e: value for e in graph.edges}, tau_max, tau_min)

    def __getitem__(self, edge: Edge) -> float:
        return self.tau.get(edge, 0.0)

    def deposit(self, edge: Edge, amount: float) -> PheromoneStore:
        """New store with ``amount`` added on ``edge`` and clamped to the bounds."""
        tau = dict(self.tau)
        tau[edge] = clamp_pheromone(self[edge] + amount, self.tau_min, self.tau_max)
        return PheromoneStore(tau, self.tau_max, self.tau_min)

    def evaporate(self, p: float, clamp: bool = False) -> PheromoneStore:
        tau = {e: evaporation_update(t, p) for e, t in self.tau.items()}
        if clamp:
            tau = {e: clamp_pheromone(t, self.tau_min, self.tau_max) for e, t in tau.items()}
        return PheromoneStore(tau, self.tau_max, self.tau_min)


@dataclass(frozen=True)
class EdgeDistribution:
    edges: tuple[Edge, ...]
    probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.edges) != len(self.probabilities):
            raise ValueError("edges and probabilities differ in length")
        if self.edges:
            if any(not 0.0 <= q <= 1.0 for q in self.probabilities):
                raise ValueError("probabilities must lie in [0, 1]")
            if abs(math.fsum(self.probabilities) - 1.0) > 1e-9:
                raise ValueError("probabilities must sum to 1")

    def __len__(self) -> int:
        return len(self.edges)

    def as_dict(self) -> dict[Edge, float]:
        return dict(zip(self.edges, self.probabilities))


# ----------------------------------------------------------------------
# Selection
# ----------------------------------------------------------------------
def transition_probabilities(node: str, graph: GraphSpec, store: PheromoneStore,
                             params: ControlParams,
                             exclude: Iterable[str] = ()) -> EdgeDistribution:
    """Edge-choice distribution at ``node``.

    Each outgoing edge gets weight ``tau**alpha * eta**beta``. Edges into
    nodes listed in ``exclude`` are dropped. If every weight is zero the
    distribution falls back to uniform.
    """
    excluded = set(exclude)
    edges = tuple(e for e in graph.out_edges(node) if e[1] not in excluded)
    if not edges:
        raise DeadEndError(f"node {node!r} has no usable outgoing edge")
    weights = [store[e] ** params.alpha * graph.eta(e) ** params.beta for e in edges]
    total = math.fsum(weights)
    if total > 0.0 and math.isfinite(total):
        probs = tuple(w / total for w in weights)
    else:
        probs = (1.0 / len(edges),) * len(edges)
    return EdgeDistribution(edges, probs)


def select_edge(dist: EdgeDistribution, rng: np.random.Generator) -> Edge:
    """Roulette-wheel draw: one uniform variate against the cumulative sum."""
    if not dist.edges:
        raise ValueError("cannot select from an empty distribution")
    cumulative = np.cumsum(dist.probabilities)
    u = rng.random() * cumulative[-1]
    idx = int(np.searchsorted(cumulative, u, side="right"))
    return dist.edges[min(idx, len(dist.edges) - 1)]


# ----------------------------------------------------------------------
# Graph file
# ----------------------------------------------------------------------
def parse_graph(text: str) -> GraphSpec:
    """Parse ``from to cost`` lines; ``#`` starts a comment."""
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'from to cost', got {raw!r}")
        try:
            cost = float(parts[2])
        except ValueError:
            raise ValueError(f"line {lineno}: bad cost {parts[2]!r}") from None
        edges.append((parts[0], parts[1], cost))
    return GraphSpec.from_edges(edges)


def load_graph(path: str | Path) -> GraphSpec:
    return parse_graph(Path(path).read_text())


def format_graph(graph: GraphSpec) -> str:
    return "".join(f"{a} {b} {c!r}\n" for (a, b), c in graph.costs.items())
