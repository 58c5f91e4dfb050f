"""Dispatch a resolved experiment config and write its CSV and manifest."""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path
from typing import Any

from . import __version__
from .config import ExperimentConfig
from .pheromone import load_graph
from .pso import run_pso
from .routing import run_colony
from .swarm import load_topology, run_scenario, sweep_csv, sweep_ordering

RNG_ALGORITHM = "PCG64 (numpy.random.default_rng(seed))"

OUTPUT_NAMES = {
    "route": "routing.csv",
    "swarm": "metrics.csv",
    "sweep": "sweep.csv",
    "pso": "pso.csv",
}


def _slots(config: ExperimentConfig):
    if config.topology is None:
        return None
    return tuple(load_topology(config.topology))


def render(config: ExperimentConfig) -> str:
    """Run the experiment and return its CSV text."""
    if config.kind == "route":
        graph = load_graph(config.graph)
        return run_colony(graph, config.routing(), config.seed).to_csv()
    if config.kind == "swarm":
        return run_scenario(config.scenario(_slots(config)), config.seed).to_csv()
    if config.kind == "sweep":
        rows = sweep_ordering(config.scenario(_slots(config)),
                              config.params["levels"], config.params["seeds"])
        return sweep_csv(rows)
    pso_config, objective = config.pso()
    return run_pso(pso_config, objective, config.seed).to_csv()


def run_experiment(config: ExperimentConfig) -> dict[str, Any]:
    """Write the CSV and ``manifest.json`` under ``config.output``; return the manifest."""
    start = time.perf_counter()
    text = render(config)
    out_dir = Path(config.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    name = OUTPUT_NAMES[config.kind]
    data = text.encode("utf-8")
    (out_dir / name).write_bytes(data)
    manifest = {
        "config": config.to_dict(),
        "tool": "swarmlab",
        "version": __version__,
        "rng": RNG_ALGORITHM,
        "duration_s": time.perf_counter() - start,
        "outputs": {name: hashlib.sha256(data).hexdigest()},
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest
