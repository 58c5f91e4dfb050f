"""Experiment configuration: JSON parsing, validation, default materialisation."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .pheromone import ControlParams
from .pso import ObjectiveSpec, PsoConfig
from .routing import RoutingConfig
from .swarm import Scenario, SwarmParams

KINDS = ("route", "swarm", "sweep", "pso")
SEED_MAX = 2**64 - 1
DEFAULT_LEVELS = (0.05, 0.10, 0.15, 0.20, 0.30, 0.35, 0.40, 0.45)


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


_CONTROL_FIELDS = [f.name for f in dataclasses.fields(ControlParams)]
_ROUTE_FIELDS = [f.name for f in dataclasses.fields(RoutingConfig) if f.name != "control"]
_SWARM_FIELDS = [f.name for f in dataclasses.fields(SwarmParams)]
_SCENARIO_FIELDS = [f.name for f in dataclasses.fields(Scenario) if f.name not in ("params", "slots")]
_PSO_FIELDS = [f.name for f in dataclasses.fields(PsoConfig)]


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    seed: int
    params: dict[str, Any]          # fully materialised kind-specific block
    output: str
    graph: str | None = None
    topology: str | None = None

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"kind": self.kind, "seed": self.seed}
        if self.graph is not None:
            d["graph"] = self.graph
        if self.topology is not None:
            d["topology"] = self.topology
        d["output"] = self.output
        d[self.kind] = self.params
        return d

    # builders for the module-level objects --------------------------------
    def routing(self) -> RoutingConfig:
        p = dict(self.params)
        control = ControlParams(**{k: p.pop(k) for k in _CONTROL_FIELDS})
        return RoutingConfig(control=control, **p)

    def scenario(self, slots=None) -> Scenario:
        p = dict(self.params)
        for key in ("levels", "seeds"):
            p.pop(key, None)
        params = SwarmParams(**{k: p.pop(k) for k in _SWARM_FIELDS})
        geo = {k: tuple(v) if isinstance(v, list) else v for k, v in p.items()}
        return Scenario(params=params, slots=slots, **geo)

    def pso(self) -> tuple[PsoConfig, ObjectiveSpec]:
        p = dict(self.params)
        objective = ObjectiveSpec(p.pop("objective"), p["dimensions"])
        if p.get("bounds") is not None:
            p["bounds"] = tuple(tuple(b) for b in p["bounds"])
        return PsoConfig(**p), objective


def _defaults(cls, names, **override) -> dict[str, Any]:
    out = {}
    for f in dataclasses.fields(cls):
        if f.name not in names:
            continue
        if f.default is not dataclasses.MISSING:
            value = f.default
        elif f.default_factory is not dataclasses.MISSING:  # type: ignore[misc]
            value = f.default_factory()  # type: ignore[misc]
        else:
            continue
        out[f.name] = list(value) if isinstance(value, tuple) else value
    out.update(override)
    return out


def _route_defaults() -> dict[str, Any]:
    d: dict[str, Any] = {"source": None, "destination": None}
    d.update(_defaults(ControlParams, _CONTROL_FIELDS))
    d.update(_defaults(RoutingConfig, _ROUTE_FIELDS))
    return d


def _swarm_defaults() -> dict[str, Any]:
    d = _defaults(SwarmParams, _SWARM_FIELDS)
    d.update(_defaults(Scenario, _SCENARIO_FIELDS))
    return d


def _pso_defaults() -> dict[str, Any]:
    d = _defaults(PsoConfig, _PSO_FIELDS)
    d["objective"] = "sphere"
    return d


def _merge(kind: str, block: dict[str, Any], defaults: dict[str, Any]) -> dict[str, Any]:
    unknown = sorted(set(block) - set(defaults))
    if unknown:
        raise ConfigError(f"{kind}.{unknown[0]}: unknown field")
    merged = dict(defaults)
    merged.update(block)
    return merged


def _check(kind: str, build) -> None:
    try:
        build()
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{kind}: {exc}") from None


def resolve(raw: dict[str, Any], base_dir: Path | str = ".",
            seed: int | None = None, output: str | None = None) -> ExperimentConfig:
    """Validate a raw config mapping and materialise every default."""
    base_dir = Path(base_dir)
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    kind = raw.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"kind: must be one of {KINDS}, got {kind!r}")
    blocks = [k for k in KINDS if k in raw]
    if any(b != kind for b in blocks):
        extra = next(b for b in blocks if b != kind)
        raise ConfigError(f"{extra}: block does not match kind {kind!r}")
    allowed = {"kind", "seed", "graph", "topology", "output", kind}
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown field")

    seed = raw.get("seed", 0) if seed is None else seed
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed <= SEED_MAX:
        raise ConfigError(f"seed: must be an integer in [0, 2**64 - 1], got {seed!r}")

    block = raw.get(kind, {})
    if not isinstance(block, dict):
        raise ConfigError(f"{kind}: block must be a JSON object")

    def path_field(name: str, required: bool) -> str | None:
        value = raw.get(name)
        if value is None:
            if required:
                raise ConfigError(f"{name}: required for kind {kind!r}")
            return None
        p = Path(value)
        if not p.is_absolute():
            p = base_dir / p
        return str(p.resolve())

    graph = path_field("graph", kind == "route")
    topology = path_field("topology", False) if kind in ("swarm", "sweep") else None
    if kind != "route" and raw.get("graph") is not None:
        raise ConfigError(f"graph: not used by kind {kind!r}")

    out = output if output is not None else raw.get("output", "out")
    out_path = Path(out)
    if not out_path.is_absolute():
        out_path = (base_dir if output is None else Path.cwd()) / out_path
    out = str(out_path.resolve())

    if kind == "route":
        params = _merge(kind, block, _route_defaults())
        for name in ("source", "destination"):
            if params.get(name) is None:
                raise ConfigError(f"route.{name}: required")
    elif kind in ("swarm", "sweep"):
        defaults = _swarm_defaults()
        if kind == "sweep":
            defaults["levels"] = list(DEFAULT_LEVELS)
            defaults["seeds"] = None
        params = _merge(kind, block, defaults)
        if kind == "sweep":
            if params["seeds"] is None:
                params["seeds"] = [(seed + i) % (SEED_MAX + 1) for i in range(10)]
            if not params["levels"] or not params["seeds"]:
                raise ConfigError("sweep.levels/seeds: must be non-empty")
            levels = params["levels"]
            if any(not isinstance(x, (int, float)) or not 0 < x <= 1 for x in levels):
                raise ConfigError("sweep.levels: each level must be in (0, 1]")
            if list(levels) != sorted(levels):
                raise ConfigError("sweep.levels: must be sorted ascending")
    else:
        params = _merge(kind, block, _pso_defaults())

    cfg = ExperimentConfig(kind, seed, params, out, graph, topology)
    if kind == "route":
        _check(kind, cfg.routing)
    elif kind in ("swarm", "sweep"):
        _check(kind, cfg.scenario)
    else:
        _check(kind, cfg.pso)
    return cfg


def load_config(path: str | Path, seed: int | None = None,
                output: str | None = None) -> ExperimentConfig:
    """Read a JSON config (or a run manifest, via its echoed config)."""
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from None
    if isinstance(raw, dict) and "config" in raw and "outputs" in raw:
        raw = raw["config"]
    return resolve(raw, path.parent, seed=seed, output=output)
