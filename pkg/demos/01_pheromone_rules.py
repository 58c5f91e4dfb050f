"""Pheromone control rules, one at a time.

Run: python demos/01_pheromone_rules.py
"""
from swarmlab import (
    ControlParams,
    GraphSpec,
    PheromoneStore,
    aging_deposit,
    evaporation_update,
    smoothing_update,
    transition_probabilities,
)

# %% Evaporation: a trail that is never refreshed fades geometrically.
tau = 10.0
for it in range(5):
    print(f"iteration {it}: tau = {tau:.4f}")
    tau = evaporation_update(tau, p=0.1)

# %% Aging: ants that travelled further deposit less.
for hops in range(6):
    print(f"{hops} hops -> deposit {aging_deposit(0.9, hops):.4f}")

# %% Smoothing: repeated reinforcement creeps toward the cap, in ever smaller steps.
tau = 0.0
for it in range(8):
    new = smoothing_update(tau, delta=0.33, tau_max=100.0)
    print(f"reinforce {it}: {tau:7.3f} -> {new:7.3f} (+{new - tau:.3f})")
    tau = new

# %% Pheromone vs heuristic: alpha and beta decide who wins.
g = GraphSpec.from_edges([("s", "cheap", 1.0), ("s", "popular", 4.0)])
store = PheromoneStore({("s", "cheap"): 1.0, ("s", "popular"): 8.0})
for alpha, beta in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 3)]:
    dist = transition_probabilities("s", g, store, ControlParams(alpha=alpha, beta=beta))
    probs = ", ".join(f"{b}={q:.3f}" for (_, b), q in dist.as_dict().items())
    print(f"alpha={alpha} beta={beta}: {probs}")
