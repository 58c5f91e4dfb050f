"""Particle swarms on sphere and rastrigin.

Run: python demos/04_pso.py
"""
from swarmlab import ObjectiveSpec, PsoConfig, run_pso

# %% Sphere converges within a hundred iterations.
rep = run_pso(PsoConfig(), ObjectiveSpec("sphere", 2), seed=1)
for it in (0, 10, 25, 50, 100):
    print(f"iter {it:3d}: best {rep.history[it]:.3e}")

# %% Rastrigin: a full swarm against a lone pair of particles that never talk.
ras = ObjectiveSpec("rastrigin", 2)
for label, cfg in [("30 particles, global", PsoConfig(n_particles=30, iterations=500)),
                   ("30 particles, ring(1)", PsoConfig(n_particles=30, iterations=500,
                                                       topology="ring(1)")),
                   ("2 particles, ring(0)", PsoConfig(n_particles=2, iterations=500,
                                                      topology="ring(0)"))]:
    finals = [run_pso(cfg, ras, s).best_fitness for s in range(10)]
    hits = sum(f < 1.0 for f in finals)
    print(f"{label:22s}: {hits}/10 seeds below 1.0, median {sorted(finals)[5]:.3f}")
