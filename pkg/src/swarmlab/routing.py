"""Ant routing over a graph with a path-keyed pheromone table.

The :class:`PathTable` mirrors the parallel ``ppath``/``pstrength``
arrays of the classic VB routing listings: an ordered list of unique
paths, updated in place when a path reappears and appended otherwise.
Ants walk on edge pheromone obtained by projecting each path's strength
onto its edges.
"""

from __future__ import annotations

import csv
import heapq
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .pheromone import (
    PATH_SEP,
    TAU_MAX_DEFAULT,
    ControlParams,
    DeadEndError,
    GraphSpec,
    PheromoneStore,
    aging_deposit,
    clamp_pheromone,
    evaporation_update,
    select_edge,
    smoothing_update,
    transition_probabilities,
)

UPDATE_MODES = ("evaporation", "aging", "smoothing")


def encode_path(nodes: Sequence[str] | str) -> str:
    """Canonical string form of a path; validates an already-encoded one."""
    if isinstance(nodes, str):
        nodes = nodes.split(PATH_SEP)
    nodes = [str(n) for n in nodes]
    if len(nodes) < 2 or any(not n for n in nodes):
        raise ValueError(f"malformed path {PATH_SEP.join(nodes)!r}")
    return PATH_SEP.join(nodes)


def decode_path(path: str) -> list[str]:
    return path.split(PATH_SEP)


@dataclass(frozen=True)
class PathRecord:
    path: str
    strength: float

    @property
    def n_nodes(self) -> int:
        return self.path.count(PATH_SEP) + 1


@dataclass(frozen=True)
class PathTable:
    records: tuple[PathRecord, ...] = ()

    def __post_init__(self) -> None:
        paths = [r.path for r in self.records]
        if len(set(paths)) != len(paths):
            raise ValueError("duplicate path in table")
        for r in self.records:
            if not r.strength >= 0.0:
                raise ValueError(f"negative strength on {r.path!r}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, float]]) -> PathTable:
        return cls(tuple(PathRecord(encode_path(p), float(s)) for p, s in pairs))

    @property
    def count(self) -> int:
        return len(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def pairs(self) -> list[tuple[str, float]]:
        return [(r.path, r.strength) for r in self.records]

    def strength(self, path: str) -> float:
        for r in self.records:
            if r.path == path:
                return r.strength
        raise KeyError(path)

    def best(self) -> PathRecord | None:
        """Record with maximal strength; earliest wins ties."""
        best = None
        for r in self.records:
            if best is None or r.strength > best.strength:
                best = r
        return best


def _update_or_append(table: PathTable, path, update, initial) -> PathTable:
    path = encode_path(path)
    records = list(table.records)
    updated = False
    for i, r in enumerate(records):
        if r.path == path:
            records[i] = PathRecord(path, update(r.strength))
            updated = True
    if not updated:
        records.append(PathRecord(path, initial))
    return PathTable(tuple(records))


def evaporate_table(table: PathTable, p: float) -> PathTable:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p!r}")
    return PathTable(tuple(PathRecord(r.path, evaporation_update(r.strength, p))
                           for r in table.records))


def record_path_aged(table: PathTable, path, hops: int, agefactor: float) -> PathTable:
    amount = aging_deposit(agefactor, hops)
    return _update_or_append(table, path, lambda s: s + amount, amount)


def record_path_smoothed(table: PathTable, path, delta: float, tau_max: float) -> PathTable:
    for r in table.records:
        if r.strength > tau_max:
            raise ValueError(f"strength {r.strength!r} of {r.path!r} exceeds tau_max={tau_max!r}")
    return _update_or_append(table, path,
                             lambda s: smoothing_update(s, delta, tau_max),
                             smoothing_update(0.0, delta, tau_max))


def reinforce_shortest(table: PathTable, amount: float = 1.0) -> PathTable:
    """Add ``amount`` to the record with the fewest nodes (first one on ties)."""
    if not table.records:
        raise ValueError("cannot reinforce an empty table")
    locn = 0
    small = table.records[0].n_nodes
    for i, r in enumerate(table.records):
        if r.n_nodes < small:
            small, locn = r.n_nodes, i
    records = list(table.records)
    r = records[locn]
    records[locn] = PathRecord(r.path, r.strength + amount)
    return PathTable(tuple(records))


def clamp_table(table: PathTable, tau_min: float, tau_max: float) -> PathTable:
    return PathTable(tuple(PathRecord(r.path, clamp_pheromone(r.strength, tau_min, tau_max))
                           for r in table.records))


def project_table(graph: GraphSpec, table: PathTable, tau_init: float = 1.0,
                  tau_max: float = TAU_MAX_DEFAULT, tau_min: float = 0.0) -> PheromoneStore:
    """Edge pheromone: ``tau_init`` plus the strength of every path using the edge."""
    tau = {e: tau_init for e in graph.edges}
    for r in table.records:
        nodes = decode_path(r.path)
        for e in zip(nodes[:-1], nodes[1:]):
            if e in tau:
                tau[e] += r.strength
    tau = {e: clamp_pheromone(t, tau_min, tau_max) for e, t in tau.items()}
    return PheromoneStore(tau, tau_max, tau_min)


# ----------------------------------------------------------------------
# Ants and colonies
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class RoutingConfig:
    source: str
    destination: str
    n_ants: int = 1
    iterations: int = 200
    control: ControlParams = field(default_factory=ControlParams)
    update_mode: str = "aging"
    max_walk_length: int | None = None   # defaults to node count - 1
    tau_init: float = 10.0
    tau_max: float = TAU_MAX_DEFAULT
    reinforce_shortest: bool = True

    def __post_init__(self) -> None:
        if self.source == self.destination:
            raise ValueError("source and destination must differ")
        if self.n_ants < 1:
            raise ValueError(f"n_ants must be positive, got {self.n_ants!r}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be positive, got {self.iterations!r}")
        if self.update_mode not in UPDATE_MODES:
            raise ValueError(f"update_mode must be one of {UPDATE_MODES}, got {self.update_mode!r}")
        if self.max_walk_length is not None and self.max_walk_length < 1:
            raise ValueError(f"max_walk_length must be positive, got {self.max_walk_length!r}")
        if not (math.isfinite(self.tau_init) and self.tau_init >= 0.0):
            raise ValueError(f"tau_init must be >= 0, got {self.tau_init!r}")
        if not (math.isfinite(self.tau_max) and self.tau_max > 0.0):
            raise ValueError(f"tau_max must be positive, got {self.tau_max!r}")


@dataclass(frozen=True)
class Ant:
    source: str
    destination: str
    visited: tuple[str, ...]
    reached: bool

    @property
    def hops(self) -> int:
        return len(self.visited) - 1

    @property
    def path(self) -> str:
        return PATH_SEP.join(self.visited)


def _check_endpoints(graph: GraphSpec, config: RoutingConfig) -> None:
    for name in ("source", "destination"):
        node = getattr(config, name)
        graph.out_edges(node)  # raises UnknownNodeError


def run_ant(graph: GraphSpec, config: RoutingConfig, store: PheromoneStore,
            rng: np.random.Generator) -> Ant:
    """Walk one ant from source toward destination without revisiting nodes.

    The ant fails (``reached=False``) at a dead end or when it exhausts
    ``max_walk_length`` steps.
    """
    _check_endpoints(graph, config)
    limit = config.max_walk_length or max(1, len(graph.nodes) - 1)
    visited = [config.source]
    current = config.source
    while current != config.destination and len(visited) - 1 < limit:
        try:
            dist = transition_probabilities(current, graph, store, config.control, exclude=visited)
        except DeadEndError:
            break
        current = select_edge(dist, rng)[1]
        visited.append(current)
    return Ant(config.source, config.destination, tuple(visited),
               current == config.destination)


def shortest_path(graph: GraphSpec, source: str, destination: str) -> list[str] | None:
    """Minimum-cost path by Dijkstra; ``None`` if unreachable."""
    graph.out_edges(source)
    graph.out_edges(destination)
    dist = {source: 0.0}
    prev: dict[str, str] = {}
    heap = [(0.0, source)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == destination:
            break
        for e in graph.out_edges(u):
            v = e[1]
            nd = d + graph.costs[e]
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                prev[v] = u
                heapq.heappush(heap, (nd, v))
    if destination not in done:
        return None
    path = [destination]
    while path[-1] != source:
        path.append(prev[path[-1]])
    return path[::-1]


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    table: PathTable
    best_path: str
    best_strength: float
    shortest_frequency: float
    successes: int


@dataclass(frozen=True)
class RoutingReport:
    iterations: tuple[IterationRecord, ...]
    shortest_path: str | None

    @property
    def final_table(self) -> PathTable:
        return self.iterations[-1].table

    @property
    def best_path(self) -> str:
        return self.iterations[-1].best_path

    @property
    def shortest_frequency(self) -> float:
        return self.iterations[-1].shortest_frequency

    @property
    def total_successes(self) -> int:
        return sum(r.successes for r in self.iterations)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "best_path", "best_strength", "shortest_frequency", "table_size"])
        for r in self.iterations:
            w.writerow([r.iteration, r.best_path, repr(r.best_strength),
                        repr(r.shortest_frequency), r.table.count])
        return buf.getvalue()


def _deposit(table: PathTable, ant: Ant, config: RoutingConfig) -> PathTable:
    ctl = config.control
    if config.update_mode == "aging":
        return record_path_aged(table, ant.path, ant.hops, ctl.agefactor)
    if config.update_mode == "smoothing":
        return record_path_smoothed(table, ant.path, ctl.delta, config.tau_max)
    # plain evaporation mode: unit deposit, no age discount
    return record_path_aged(table, ant.path, 0, ctl.agefactor)


def colony_iteration(graph: GraphSpec, config: RoutingConfig, table: PathTable,
                     rng: np.random.Generator) -> tuple[PathTable, list[Ant]]:
    """One iteration: launch ants, deposit, reinforce the shortest record, evaporate."""
    store = project_table(graph, table, config.tau_init, config.tau_max)
    ants = [run_ant(graph, config, store, rng) for _ in range(config.n_ants)]
    for ant in ants:
        if ant.reached:
            table = _deposit(table, ant, config)
    if config.reinforce_shortest and table.records:
        table = reinforce_shortest(table)
    table = clamp_table(table, 0.0, config.tau_max)
    table = evaporate_table(table, config.control.p)
    return table, ants


def run_colony(graph: GraphSpec, config: RoutingConfig, seed: int = 0) -> RoutingReport:
    _check_endpoints(graph, config)
    rng = np.random.default_rng(seed)
    target = shortest_path(graph, config.source, config.destination)
    target_key = PATH_SEP.join(target) if target else None
    table = PathTable()
    history = []
    for it in range(1, config.iterations + 1):
        table, ants = colony_iteration(graph, config, table, rng)
        hits = sum(1 for a in ants if a.reached and a.path == target_key)
        best = table.best()
        history.append(IterationRecord(
            iteration=it,
            table=table,
            best_path=best.path if best else "",
            best_strength=best.strength if best else 0.0,
            shortest_frequency=hits / len(ants),
            successes=sum(a.reached for a in ants),
        ))
    return RoutingReport(tuple(history), target_key)
