"""2D swarm aggregation: random search, beacon congregation, slot claiming.

Agents wander until one of them comes within ``detect_radius`` of the
target area and switches on a global beacon. From then on every free
agent steers at full speed toward the nearest unclaimed topology slot
and claims it on arrival; claimed agents stop for good. Free agents that
linger near claimed slots are slowed geometrically by ``crowd_damping``,
which is what makes the swarm freeze once the slots run out.

State is kept as arrays (struct-of-arrays); :func:`step_world` never
mutates its input.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class SwarmParams:
    v_max: float = 1.0
    turn_noise: float = 0.5         # radians, heading perturbation bound
    detect_radius: float = 10.0
    claim_radius: float = 0.5
    crowd_radius: float = 2.0
    crowd_damping: float = 0.98
    delta_desired: float = 0.40
    max_steps: int = 10_000
    slot_fraction: float = 0.40

    def __post_init__(self) -> None:
        positive = ("v_max", "detect_radius", "claim_radius", "crowd_radius")
        for name in positive:
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be positive, got {v!r}")
        if not (math.isfinite(self.turn_noise) and self.turn_noise >= 0.0):
            raise ValueError(f"turn_noise must be >= 0, got {self.turn_noise!r}")
        if not 0.0 < self.crowd_damping < 1.0:
            raise ValueError(f"crowd_damping must be in (0, 1), got {self.crowd_damping!r}")
        if not 0.0 < self.delta_desired <= 1.0:
            raise ValueError(f"delta_desired must be in (0, 1], got {self.delta_desired!r}")
        if not 0.0 < self.slot_fraction <= 1.0:
            raise ValueError(f"slot_fraction must be in (0, 1], got {self.slot_fraction!r}")
        if int(self.max_steps) != self.max_steps or self.max_steps < 1:
            raise ValueError(f"max_steps must be a positive integer, got {self.max_steps!r}")


@dataclass(frozen=True)
class Scenario:
    """Geometry and population for one run."""

    params: SwarmParams = field(default_factory=SwarmParams)
    n_agents: int = 20
    arena: tuple[float, float] = (100.0, 100.0)
    target_center: tuple[float, float] = (85.0, 50.0)
    slot_spacing: float = 2.0
    start_box: tuple[float, float, float, float] = (0.0, 0.0, 20.0, 100.0)  # x0, y0, x1, y1
    slots: tuple[tuple[float, float], ...] | None = None  # overrides the generated ring

    def __post_init__(self) -> None:
        if self.n_agents < 1:
            raise ValueError(f"n_agents must be positive, got {self.n_agents!r}")
        w, h = self.arena
        if not (w > 0 and h > 0):
            raise ValueError(f"arena must have positive size, got {self.arena!r}")
        x0, y0, x1, y1 = self.start_box
        if not (0 <= x0 <= x1 <= w and 0 <= y0 <= y1 <= h):
            raise ValueError(f"start_box {self.start_box!r} must lie inside the arena")
        if self.slot_spacing <= 0:
            raise ValueError(f"slot_spacing must be positive, got {self.slot_spacing!r}")

    @property
    def n_slots(self) -> int:
        if self.slots is not None:
            return len(self.slots)
        return max(1, int(math.floor(self.params.slot_fraction * self.n_agents + 0.5)))


@dataclass(frozen=True)
class TopologySpec:
    slots: np.ndarray   # (K, 2)
    claim_radius: float

    def __post_init__(self) -> None:
        slots = np.asarray(self.slots, dtype=float).reshape(-1, 2)
        if len(slots) < 1:
            raise ValueError("topology needs at least one slot")
        if len({tuple(s) for s in slots.tolist()}) != len(slots):
            raise ValueError("topology slots must be pairwise distinct")
        object.__setattr__(self, "slots", slots)

    @property
    def centroid(self) -> np.ndarray:
        return self.slots.mean(axis=0)

    def __len__(self) -> int:
        return len(self.slots)


def ring_slots(k: int, center: Sequence[float], spacing: float = 2.0) -> np.ndarray:
    """``k`` grid points spread evenly along the smallest square ring holding them.

    The ring lives on a lattice of pitch ``spacing`` centred on ``center``.
    """
    if k < 1:
        raise ValueError("need at least one slot")
    if k == 1:
        return np.array([center], dtype=float)
    m = 2
    while 4 * (m - 1) < k:
        m += 1
    half = (m - 1) / 2.0
    # walk the perimeter counter-clockwise from the lower-left corner
    perim = []
    for i in range(m - 1):
        perim.append((i, 0))
    for j in range(m - 1):
        perim.append((m - 1, j))
    for i in range(m - 1, 0, -1):
        perim.append((i, m - 1))
    for j in range(m - 1, 0, -1):
        perim.append((0, j))
    n = len(perim)
    picks = [perim[(i * n) // k] for i in range(k)]
    cx, cy = center
    return np.array([(cx + (i - half) * spacing, cy + (j - half) * spacing) for i, j in picks])


@dataclass(frozen=True)
class AgentState:
    position: tuple[float, float]
    velocity: tuple[float, float]
    heading: float
    matched: bool
    claimed_slot: int | None


@dataclass(frozen=True)
class SwarmWorld:
    pos: np.ndarray          # (N, 2)
    vel: np.ndarray          # (N, 2)
    heading: np.ndarray      # (N,)
    slot_of: np.ndarray      # (N,) claimed slot index or -1
    topology: TopologySpec
    arena: tuple[float, float]
    params: SwarmParams
    beacon_active: bool = False
    beacon: tuple[float, float] | None = None
    step: int = 0

    @property
    def n_agents(self) -> int:
        return len(self.pos)

    @property
    def matched(self) -> np.ndarray:
        return self.slot_of >= 0

    @property
    def slot_owner(self) -> np.ndarray:
        owner = np.full(len(self.topology), -1, dtype=int)
        idx = np.flatnonzero(self.slot_of >= 0)
        owner[self.slot_of[idx]] = idx
        return owner

    @property
    def agents(self) -> list[AgentState]:
        return [
            AgentState(
                position=(float(p[0]), float(p[1])),
                velocity=(float(v[0]), float(v[1])),
                heading=float(h),
                matched=bool(s >= 0),
                claimed_slot=int(s) if s >= 0 else None,
            )
            for p, v, h, s in zip(self.pos, self.vel, self.heading, self.slot_of)
        ]


@dataclass(frozen=True)
class SwarmMetrics:
    step: int
    ordering_factor: float
    mean_velocity_magnitude: float
    beacon_active: bool
    unmatched_speed: float   # mean |v_i| over free agents, 0 when none are free


def make_world(pos, topology: TopologySpec, params: SwarmParams,
               arena: tuple[float, float] = (100.0, 100.0), vel=None, heading=None,
               slot_of=None, beacon_active: bool = False) -> SwarmWorld:
    """Assemble a world from explicit arrays; missing pieces default to rest."""
    pos = np.array(pos, dtype=float).reshape(-1, 2)
    n = len(pos)
    vel = np.zeros((n, 2)) if vel is None else np.array(vel, dtype=float).reshape(-1, 2)
    if heading is None:
        heading = np.arctan2(vel[:, 1], vel[:, 0])
    heading = np.array(heading, dtype=float).reshape(n)
    slot_of = np.full(n, -1, dtype=int) if slot_of is None else np.array(slot_of, dtype=int)
    vel[slot_of >= 0] = 0.0
    beacon = tuple(topology.centroid.tolist()) if beacon_active else None
    return SwarmWorld(pos, vel, heading, slot_of, topology, arena, params,
                      beacon_active, beacon)


def initial_world(scenario: Scenario, rng: np.random.Generator) -> SwarmWorld:
    p = scenario.params
    if scenario.slots is not None:
        slots = np.asarray(scenario.slots, dtype=float)
    else:
        slots = ring_slots(scenario.n_slots, scenario.target_center, scenario.slot_spacing)
    topo = TopologySpec(slots, p.claim_radius)
    w, h = scenario.arena
    if np.any(topo.slots < 0) or np.any(topo.slots[:, 0] > w) or np.any(topo.slots[:, 1] > h):
        raise ValueError("topology slots must lie inside the arena")
    x0, y0, x1, y1 = scenario.start_box
    n = scenario.n_agents
    pos = np.column_stack([rng.uniform(x0, x1, n), rng.uniform(y0, y1, n)])
    heading = rng.uniform(-math.pi, math.pi, n)
    vel = p.v_max * np.column_stack([np.cos(heading), np.sin(heading)])
    world = make_world(pos, topo, p, scenario.arena, vel, heading)
    # agents dropped onto a free slot hold it from the start
    return claim_slots(world)


def claim_slots(world: SwarmWorld) -> SwarmWorld:
    """Let agents already standing on free slots claim them, without moving."""
    vel, slot_of = world.vel.copy(), world.slot_of.copy()
    _, vel, slot_of = _claim(world.pos, vel, slot_of, world.topology)
    return replace(world, vel=vel, slot_of=slot_of)


def _claim(pos, vel, slot_of, topo: TopologySpec):
    """Claims in agent-index order; each agent takes its nearest free slot in range."""
    owner = np.full(len(topo), -1, dtype=int)
    for i in np.flatnonzero(slot_of >= 0):
        owner[slot_of[i]] = i
    candidates = np.flatnonzero(slot_of < 0)
    open_slots = topo.slots[owner < 0]
    if candidates.size == 0 or open_slots.size == 0:
        return pos, vel, slot_of
    gap = np.hypot(*(pos[candidates][:, None, :] - open_slots[None, :, :]).transpose(2, 0, 1))
    candidates = candidates[gap.min(axis=1) <= topo.claim_radius]
    for i in candidates:
        free = np.flatnonzero(owner < 0)
        if free.size == 0:
            break
        d = np.hypot(*(topo.slots[free] - pos[i]).T)
        j = int(np.argmin(d))  # first minimum: lowest slot index
        if d[j] <= topo.claim_radius:
            owner[free[j]] = i
            slot_of[i] = free[j]
            vel[i] = 0.0
    return pos, vel, slot_of


def _reflect(pos: np.ndarray, heading: np.ndarray, arena: tuple[float, float]):
    for axis, size in enumerate(arena):
        low, high = pos[:, axis] < 0.0, pos[:, axis] > size
        pos[low, axis] = -pos[low, axis]
        pos[high, axis] = 2.0 * size - pos[high, axis]
        hit = low | high
        if axis == 0:
            heading[hit] = math.pi - heading[hit]
        else:
            heading[hit] = -heading[hit]
    np.clip(pos[:, 0], 0.0, arena[0], out=pos[:, 0])
    np.clip(pos[:, 1], 0.0, arena[1], out=pos[:, 1])


def step_world(world: SwarmWorld, rng: np.random.Generator) -> SwarmWorld:
    """Advance one time step.

    Order within a step: beacon check, crowd damping from start-of-step
    positions, heading choice, move (steering never overshoots its
    target), wall reflection, slot claims.
    """
    p = world.params
    topo = world.topology
    pos = world.pos.copy()
    vel = world.vel.copy()
    heading = world.heading.copy()
    slot_of = world.slot_of.copy()
    free = slot_of < 0
    beacon_active, beacon = world.beacon_active, world.beacon

    # one draw per agent per step keeps the stream layout fixed
    noise = rng.uniform(-p.turn_noise, p.turn_noise, world.n_agents)

    centroid = topo.centroid
    if not beacon_active:
        d = np.hypot(*(pos - centroid).T)
        finders = np.flatnonzero(free & (d <= p.detect_radius))
        if finders.size:
            beacon_active, beacon = True, (float(centroid[0]), float(centroid[1]))

    claimed = slot_of[~free]
    speed = np.full(world.n_agents, p.v_max)
    if claimed.size:
        cd = np.hypot(*(pos[:, None, :] - topo.slots[claimed][None, :, :]).transpose(2, 0, 1))
        crowded = free & (cd.min(axis=1) <= p.crowd_radius)
        prev = np.hypot(vel[:, 0], vel[:, 1])
        speed[crowded] = prev[crowded] * p.crowd_damping

    step_len = speed.copy()
    if beacon_active:
        owner = np.full(len(topo), -1, dtype=int)
        owner[claimed] = np.flatnonzero(~free)
        open_slots = np.flatnonzero(owner < 0)
        targets = open_slots if open_slots.size else np.flatnonzero(owner >= 0)
        idx = np.flatnonzero(free)
        offset = topo.slots[targets][None, :, :] - pos[idx][:, None, :]
        dist = np.hypot(offset[..., 0], offset[..., 1])
        j = np.argmin(dist, axis=1)  # first minimum: lowest slot index
        rows = np.arange(len(idx))
        to, d = offset[rows, j], dist[rows, j]
        moving = d > 0.0
        heading[idx[moving]] = np.arctan2(to[moving, 1], to[moving, 0])
        step_len[idx] = np.minimum(speed[idx], d)
    else:
        heading[free] = heading[free] + noise[free]

    disp = step_len[:, None] * np.column_stack([np.cos(heading), np.sin(heading)])
    disp[~free] = 0.0
    pos += disp
    vel = disp.copy()
    _reflect(pos, heading, world.arena)
    heading = np.arctan2(np.sin(heading), np.cos(heading))
    _, vel, slot_of = _claim(pos, vel, slot_of, topo)

    return replace(world, pos=pos, vel=vel, heading=heading, slot_of=slot_of,
                   beacon_active=beacon_active, beacon=beacon, step=world.step + 1)


# ----------------------------------------------------------------------
# Metrics
# ----------------------------------------------------------------------
def ordering_factor(world: SwarmWorld) -> float:
    """Fraction of agents sitting on a claimed topology slot."""
    if world.n_agents == 0:
        raise ValueError("ordering factor undefined for an empty swarm")
    return int(np.count_nonzero(world.slot_of >= 0)) / world.n_agents


def mean_velocity(world: SwarmWorld) -> tuple[np.ndarray, float]:
    """Vector mean of the agent velocities and its Euclidean norm."""
    if world.n_agents == 0:
        raise ValueError("mean velocity undefined for an empty swarm")
    v = world.vel.sum(axis=0) / world.n_agents
    return v, float(math.hypot(v[0], v[1]))


def measure(world: SwarmWorld) -> SwarmMetrics:
    free = world.slot_of < 0
    speeds = np.hypot(world.vel[free, 0], world.vel[free, 1])
    return SwarmMetrics(
        step=world.step,
        ordering_factor=ordering_factor(world),
        mean_velocity_magnitude=mean_velocity(world)[1],
        beacon_active=world.beacon_active,
        unmatched_speed=float(speeds.mean()) if speeds.size else 0.0,
    )


@dataclass(frozen=True)
class ScenarioResult:
    metrics: tuple[SwarmMetrics, ...]
    reached: bool
    final_world: SwarmWorld

    def first_attainment(self, level: float) -> SwarmMetrics | None:
        for m in self.metrics:
            if m.ordering_factor >= level:
                return m
        return None

    def to_csv(self) -> str:
        return metrics_csv(self.metrics)


def metrics_csv(metrics: Sequence[SwarmMetrics]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "delta", "mean_v", "beacon"])
    for m in metrics:
        w.writerow([m.step, repr(m.ordering_factor), repr(m.mean_velocity_magnitude),
                    int(m.beacon_active)])
    return buf.getvalue()


def run_world(world: SwarmWorld, rng: np.random.Generator) -> ScenarioResult:
    p = world.params
    history = [measure(world)]
    while history[-1].ordering_factor < p.delta_desired and world.step < p.max_steps:
        world = step_world(world, rng)
        history.append(measure(world))
    return ScenarioResult(tuple(history), history[-1].ordering_factor >= p.delta_desired, world)


def run_scenario(scenario: Scenario, seed: int = 0) -> ScenarioResult:
    """Step until the desired ordering factor is met or ``max_steps`` runs out."""
    rng = np.random.default_rng(seed)
    return run_world(initial_world(scenario, rng), rng)


@dataclass(frozen=True)
class SweepRow:
    level: float
    mean_v: float            # seed-averaged |V| / v_max
    attained: int            # seeds that reached the level
    per_seed: tuple[float, ...]


def sweep_ordering(scenario: Scenario, levels: Sequence[float],
                   seeds: Sequence[int]) -> list[SweepRow]:
    """|V|/v_max at the first step each ordering level is reached, averaged over seeds.

    A level that is never reached contributes |V| at termination. One run
    per seed, targeting the highest level, serves all lower levels: runs
    are deterministic, so the prefix is the same as a run stopped earlier.
    """
    levels = [float(x) for x in levels]
    if not levels or not seeds:
        raise ValueError("levels and seeds must be non-empty")
    if any(not 0.0 < x <= 1.0 for x in levels):
        raise ValueError("levels must lie in (0, 1]")
    if levels != sorted(levels):
        raise ValueError("levels must be sorted ascending")
    v_max = scenario.params.v_max
    run_cfg = replace(scenario, params=replace(scenario.params, delta_desired=levels[-1]))
    table = np.zeros((len(levels), len(seeds)))
    hits = np.zeros(len(levels), dtype=int)
    for s_idx, seed in enumerate(seeds):
        result = run_scenario(run_cfg, seed)
        for l_idx, level in enumerate(levels):
            m = result.first_attainment(level)
            if m is None:
                m = result.metrics[-1]
            else:
                hits[l_idx] += 1
            table[l_idx, s_idx] = m.mean_velocity_magnitude / v_max
    return [SweepRow(level, float(table[i].mean()), int(hits[i]), tuple(table[i].tolist()))
            for i, level in enumerate(levels)]


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "mean_v", "attained"])
    for r in rows:
        w.writerow([repr(r.level), repr(r.mean_v), r.attained])
    return buf.getvalue()


# ----------------------------------------------------------------------
# Topology file
# ----------------------------------------------------------------------
def parse_topology(text: str) -> list[tuple[float, float]]:
    slots = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'x y', got {raw!r}")
        slots.append((float(parts[0]), float(parts[1])))
    if not slots:
        raise ValueError("topology file has no slots")
    return slots


def load_topology(path: str | Path) -> list[tuple[float, float]]:
    return parse_topology(Path(path).read_text())
