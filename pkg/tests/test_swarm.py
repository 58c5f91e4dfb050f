import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swarmlab.swarm import (
    Scenario,
    SwarmParams,
    TopologySpec,
    claim_slots,
    initial_world,
    make_world,
    mean_velocity,
    measure,
    metrics_csv,
    ordering_factor,
    parse_topology,
    ring_slots,
    run_scenario,
    run_world,
    step_world,
    sweep_csv,
    sweep_ordering,
)

P = SwarmParams()
ONE_SLOT = TopologySpec([(50.0, 50.0)], P.claim_radius)


def world_with(n, matched=0, vel=None, k=None):
    k = k or max(matched, 1)
    slots = [(10.0 + 3 * i, 10.0) for i in range(k)]
    topo = TopologySpec(slots, P.claim_radius)
    pos = [slots[i] if i < matched else (80.0, 80.0) for i in range(n)]
    slot_of = [i if i < matched else -1 for i in range(n)]
    return make_world(pos, topo, P, vel=vel, slot_of=slot_of)


# -- metrics ------------------------------------------------------------
@pytest.mark.parametrize("n, m, expected", [(20, 5, 0.25), (20, 0, 0.0), (6, 6, 1.0)])
def test_ordering_factor(n, m, expected):
    assert ordering_factor(world_with(n, m, k=max(m, 1))) == expected


def test_mean_velocity_examples():
    v, mag = mean_velocity(world_with(2, vel=[(1, 0), (-1, 0)]))
    assert mag == 0.0 and v.tolist() == [0.0, 0.0]
    assert mean_velocity(world_with(4, vel=[(0.5, 0)] * 4))[1] == pytest.approx(0.5)
    assert mean_velocity(world_with(2, vel=[(1, 0), (0, 1)]))[1] == pytest.approx(math.sqrt(2) / 2)


def test_metrics_reject_empty_swarm():
    w = make_world(np.zeros((0, 2)), ONE_SLOT, P)
    with pytest.raises(ValueError):
        ordering_factor(w)
    with pytest.raises(ValueError):
        mean_velocity(w)


# -- step rules ---------------------------------------------------------
def test_claim_within_radius():
    w = make_world([(50.3, 50.0)], ONE_SLOT, P, vel=[(1, 0)], beacon_active=True)
    w2 = step_world(w, np.random.default_rng(0))
    assert w2.agents[0].matched and w2.agents[0].claimed_slot == 0
    assert w2.agents[0].velocity == (0.0, 0.0)
    assert w.slot_of[0] == -1  # input untouched


def test_beacon_stays_off_far_from_target():
    rng = np.random.default_rng(1)
    pos = rng.uniform(0, 20, (10, 2))
    vel = np.tile([1.0, 0.0], (10, 1))
    w = make_world(pos, ONE_SLOT, P, vel=vel)
    w2 = step_world(w, rng)
    assert not w2.beacon_active
    assert np.all(np.hypot(*(w2.pos - w.pos).T) <= P.v_max + 1e-12)


def test_beacon_switches_on_near_target():
    w = make_world([(10, 10), (55, 50)], ONE_SLOT, P, vel=[(1, 0), (1, 0)])
    assert step_world(w, np.random.default_rng(0)).beacon_active


def test_tie_lowest_index_claims():
    w = make_world([(49.7, 50.0), (50.3, 50.0)], ONE_SLOT, P, vel=[(1, 0), (-1, 0)],
                   beacon_active=True)
    w2 = step_world(w, np.random.default_rng(0))
    assert w2.slot_of.tolist() == [0, -1]


def test_nearest_slot_tie_goes_to_lowest_slot():
    topo = TopologySpec([(49.8, 50.0), (50.2, 50.0)], P.claim_radius)
    w = make_world([(50.0, 50.0)], topo, P, beacon_active=True)
    assert step_world(w, np.random.default_rng(0)).slot_of.tolist() == [0]


def test_crowd_damping_is_geometric():
    # one claimed slot, no free ones: the free agent circles in at damped speed
    params = SwarmParams(crowd_radius=5.0)
    w = make_world([(50, 50), (54, 50)], TopologySpec([(50, 50)], 0.5), params,
                   vel=[(0, 0), (-1, 0)], slot_of=[0, -1], beacon_active=True)
    w = step_world(w, np.random.default_rng(0))
    assert np.hypot(*w.vel[1]) == pytest.approx(params.crowd_damping)
    w = step_world(w, np.random.default_rng(0))
    assert np.hypot(*w.vel[1]) == pytest.approx(params.crowd_damping ** 2)


def test_walls_reflect():
    w = make_world([(99.8, 50.0), (0.1, 0.1)], TopologySpec([(50, 50)], 0.5),
                   SwarmParams(turn_noise=0.0), vel=[(1, 0), (-0.7, -0.7)])
    w2 = step_world(w, np.random.default_rng(0))
    assert 0 <= w2.pos[:, 0].min() and w2.pos[:, 0].max() <= 100
    assert 0 <= w2.pos[:, 1].min() and w2.pos[:, 1].max() <= 100
    assert w2.pos[0, 0] == pytest.approx(99.2)
    assert math.cos(w2.heading[0]) < 0


# -- scenarios ----------------------------------------------------------
def test_agents_starting_on_slots():
    topo = TopologySpec(ring_slots(8, (50, 50)), P.claim_radius)
    world = claim_slots(make_world(topo.slots.copy(), topo, P, vel=np.full((8, 2), 0.5)))
    m = measure(world)
    assert m.ordering_factor == 1.0 and m.mean_velocity_magnitude == 0.0
    res = run_world(world, np.random.default_rng(0))
    assert res.reached and len(res.metrics) == 1


def test_initial_world_claims_agents_dropped_on_slots():
    slots = ((5.0, 5.0), (6.0, 9.0))
    sc = Scenario(n_agents=2, slots=slots, start_box=(5.0, 5.0, 5.0, 5.0))
    m = measure(initial_world(sc, np.random.default_rng(0)))
    assert m.ordering_factor == 0.5 and m.mean_velocity_magnitude <= 0.5


def test_low_target_is_reached():
    res = run_scenario(Scenario(params=SwarmParams(delta_desired=0.05)), seed=7)
    assert res.reached and res.metrics[-1].ordering_factor >= 0.05
    assert res.metrics[-1].step < P.max_steps


def test_stall_when_target_exceeds_slots():
    res = run_scenario(Scenario(params=SwarmParams(delta_desired=0.45)), seed=3)
    assert not res.reached
    assert res.metrics[-1].step == P.max_steps
    assert res.metrics[-1].ordering_factor == pytest.approx(0.40)
    assert res.metrics[-1].unmatched_speed <= 0.01 * P.v_max


def test_ring_slots_distinct_on_grid():
    for k in range(1, 30):
        s = ring_slots(k, (50, 50), 2.0)
        assert len(s) == k
        assert len({tuple(p) for p in s.tolist()}) == k
        assert np.allclose((s - 50) / 2.0 * 2 % 1, 0) or k == 1


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 30), st.floats(0.1, 1.0), st.floats(0.0, 1.5))
def test_run_invariants(seed, n, frac, noise):
    params = SwarmParams(slot_fraction=frac, turn_noise=noise, delta_desired=1.0, max_steps=300)
    sc = Scenario(params=params, n_agents=n, start_box=(0, 0, 100, 100))
    rng = np.random.default_rng(seed)
    world = initial_world(sc, rng)
    prev = 0.0
    for _ in range(300):
        world = step_world(world, rng)
        m = measure(world)
        assert m.ordering_factor >= prev
        prev = m.ordering_factor
        assert m.mean_velocity_magnitude <= (1 - m.ordering_factor) * params.v_max + 1e-12
        assert np.all(np.hypot(*world.vel.T) <= params.v_max + 1e-12)
        assert np.all(world.pos >= 0) and np.all(world.pos <= 100)
        assert np.count_nonzero(world.matched) <= len(world.topology)


def test_run_is_deterministic():
    sc = Scenario(params=SwarmParams(delta_desired=0.3))
    assert run_scenario(sc, 5).to_csv() == run_scenario(sc, 5).to_csv()


def test_metrics_csv_layout():
    res = run_scenario(Scenario(params=SwarmParams(max_steps=3, delta_desired=1.0)), 0)
    lines = metrics_csv(res.metrics).splitlines()
    assert lines[0] == "step,delta,mean_v,beacon"
    assert len(lines) == 5


# -- sweep --------------------------------------------------------------
def test_sweep_full_slot_geometry_stops_dead():
    params = SwarmParams(slot_fraction=1.0, max_steps=5000)
    rows = sweep_ordering(Scenario(params=params, n_agents=4), [1.0], [0])
    assert rows[0].attained == 1 and rows[0].mean_v == 0.0


def test_sweep_errors():
    with pytest.raises(ValueError):
        sweep_ordering(Scenario(), [], [0])
    with pytest.raises(ValueError):
        sweep_ordering(Scenario(), [0.2], [])
    with pytest.raises(ValueError):
        sweep_ordering(Scenario(), [0.3, 0.1], [0])


def test_sweep_matches_independent_runs():
    sc = Scenario()
    levels = [0.05, 0.2, 0.35]
    rows = sweep_ordering(sc, levels, [4])
    for row, level in zip(rows, levels):
        solo = run_scenario(Scenario(params=SwarmParams(delta_desired=level)), 4)
        assert solo.reached
        assert row.mean_v == solo.metrics[-1].mean_velocity_magnitude / sc.params.v_max


def test_sweep_deterministic_csv():
    sc = Scenario(params=SwarmParams(max_steps=2000))
    a = sweep_csv(sweep_ordering(sc, [0.1, 0.4], [1, 2]))
    assert a == sweep_csv(sweep_ordering(sc, [0.1, 0.4], [1, 2]))
    assert a.splitlines()[0] == "level,mean_v,attained"


def test_topology_file():
    assert parse_topology("# slots\n1 2\n3.5 4\n") == [(1.0, 2.0), (3.5, 4.0)]
    with pytest.raises(ValueError):
        parse_topology("1 2 3\n")
    with pytest.raises(ValueError):
        TopologySpec([(1, 1), (1, 1)], 0.5)


def test_params_validation():
    for bad in ({"crowd_damping": 1.0}, {"v_max": 0.0}, {"delta_desired": 0.0}, {"max_steps": 0}):
        with pytest.raises(ValueError, match=next(iter(bad))):
            SwarmParams(**bad)
