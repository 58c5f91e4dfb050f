"""Random search, beacon, slot claiming, and the stall past 40 %.

Run: python demos/03_swarm_aggregation.py   (about 20 s)
"""
from swarmlab import Scenario, SwarmParams, run_scenario, sweep_ordering

# %% One run up to a modest ordering target.
res = run_scenario(Scenario(params=SwarmParams(delta_desired=0.3)), seed=7)
beacon_on = next(m.step for m in res.metrics if m.beacon_active)
print(f"beacon switched on at step {beacon_on}; reached 0.3 at step {res.metrics[-1].step}")
for m in res.metrics[beacon_on::15]:
    print(f"  step {m.step:4d}  delta {m.ordering_factor:.2f}  |V| {m.mean_velocity_magnitude:.3f}")

# %% Asking for more order than there are slots: the swarm freezes.
stuck = run_scenario(Scenario(params=SwarmParams(delta_desired=0.45)), seed=7)
last = stuck.metrics[-1]
print(f"target 0.45: reached={stuck.reached}, delta={last.ordering_factor:.2f}, "
      f"free-agent speed {last.unmatched_speed:.2e} after {last.step} steps")

# %% Ordering factor vs mean velocity, averaged over ten seeds.
levels = [0.05, 0.10, 0.15, 0.20, 0.30, 0.35, 0.40, 0.45]
print("delta  |V|/v_max  attained")
for row in sweep_ordering(Scenario(), levels, range(10)):
    print(f"{row.level:5.2f}  {row.mean_v:9.3f}  {row.attained:2d}/10")
