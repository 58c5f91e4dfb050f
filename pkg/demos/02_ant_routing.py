"""Ant routing on the bundled five-node graph.

The cheapest route A-B-E is also the only two-hop route, but from A the
edge to C looks cheaper, so early ants mostly head the wrong way.

Run: python demos/02_ant_routing.py
"""
from importlib.resources import files

from swarmlab import RoutingConfig, parse_graph, run_colony

graph = parse_graph(files("swarmlab").joinpath("data/five_node.txt").read_text())
print("edges:", graph.costs)

# %% One colony, default settings (aging deposits, +1 for the shortest record).
report = run_colony(graph, RoutingConfig("A", "E"), seed=42)
for it in (1, 5, 20, 50, 200):
    rec = report.iterations[it - 1]
    print(f"iter {it:3d}: best {rec.best_path:8s} strength {rec.best_strength:6.2f} "
          f"table size {rec.table.count}")
print("final table:")
for path, strength in report.final_table.pairs():
    print(f"  {path:10s} {strength:8.3f}")

# %% The three update modes side by side, over ten seeds.
for mode in ("evaporation", "aging", "smoothing"):
    best = [run_colony(graph, RoutingConfig("A", "E", update_mode=mode), s).best_path
            for s in range(10)]
    print(f"{mode:11s}: {best.count('A-B-E')}/10 seeds end on A-B-E")
