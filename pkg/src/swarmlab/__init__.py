"""Pheromone control, ant routing, particle swarms and a 2D aggregation simulator."""

__version__ = "0.1.0"

from .pheromone import (  # noqa: E402
    ControlParams,
    DeadEndError,
    EdgeDistribution,
    GraphSpec,
    PheromoneStore,
    UnknownNodeError,
    aging_deposit,
    clamp_pheromone,
    evaporation_update,
    load_graph,
    parse_graph,
    select_edge,
    smoothing_update,
    transition_probabilities,
)
from .routing import (  # noqa: E402
    Ant,
    PathRecord,
    PathTable,
    RoutingConfig,
    RoutingReport,
    evaporate_table,
    record_path_aged,
    record_path_smoothed,
    reinforce_shortest,
    run_ant,
    run_colony,
)
from .swarm import (  # noqa: E402
    Scenario,
    SwarmParams,
    SwarmWorld,
    mean_velocity,
    ordering_factor,
    run_scenario,
    step_world,
    sweep_ordering,
)
from .pso import ObjectiveSpec, PsoConfig, neighborhood_best, pso_step, run_pso  # noqa: E402
