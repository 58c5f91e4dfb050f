import json
from importlib.resources import files

import pytest

from swarmlab.cli import main
from swarmlab.config import ConfigError, load_config

GRAPH = str(files("swarmlab").joinpath("data/five_node.txt"))


def write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def test_minimal_swarm_config_materialises_defaults(tmp_path):
    cfg = load_config(write(tmp_path, {"kind": "swarm", "seed": 4}))
    assert cfg.seed == 4
    assert cfg.params["n_agents"] == 20
    assert cfg.params["crowd_damping"] == 0.98
    assert cfg.params["max_steps"] == 10_000


def test_seed_defaults_to_zero_explicitly(tmp_path):
    cfg = load_config(write(tmp_path, {"kind": "pso"}))
    assert cfg.to_dict()["seed"] == 0


@pytest.mark.parametrize("raw, field", [
    ({"kind": "route", "graph": GRAPH, "route": {"source": "A", "destination": "E", "p": 1.5}}, "p"),
    ({"kind": "swarm", "swarm": {"crowd_damping": 2}}, "crowd_damping"),
    ({"kind": "swarm", "swarm": {"warp": 1}}, "warp"),
    ({"kind": "pso", "swarm": {}}, "swarm"),
    ({"kind": "warp"}, "kind"),
    ({"kind": "pso", "seed": -1}, "seed"),
    ({"kind": "route", "route": {"source": "A", "destination": "E"}}, "graph"),
    ({"kind": "sweep", "sweep": {"levels": [0.4, 0.1]}}, "levels"),
])
def test_validation_names_field(tmp_path, raw, field):
    with pytest.raises(ConfigError, match=field):
        load_config(write(tmp_path, raw))


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="malformed"):
        load_config(bad)


def test_manifest_round_trip(tmp_path):
    path = write(tmp_path, {"kind": "pso", "seed": 3, "output": "out",
                            "pso": {"iterations": 20}})
    assert main(["run", str(path), "--quiet"]) == 0
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert load_config(path).to_dict() == manifest["config"]
    assert load_config(tmp_path / "out" / "manifest.json") == load_config(path)
    assert main(["run", str(tmp_path / "out" / "manifest.json"), "--out",
                 str(tmp_path / "again"), "--quiet"]) == 0
    again = json.loads((tmp_path / "again" / "manifest.json").read_text())
    assert again["outputs"] == manifest["outputs"]
    assert manifest["rng"].startswith("PCG64")


def test_route_run_finds_known_shortest(tmp_path):
    path = write(tmp_path, {"kind": "route", "graph": GRAPH, "seed": 42,
                            "route": {"source": "A", "destination": "E"}})
    assert main(["run", str(path), "--out", str(tmp_path / "o"), "--quiet"]) == 0
    rows = (tmp_path / "o" / "routing.csv").read_text().splitlines()
    assert rows[0] == "iteration,best_path,best_strength,shortest_frequency,table_size"
    assert len(rows) == 201
    assert rows[-1].split(",")[1] == "A-B-E"


def test_seed_override(tmp_path):
    path = write(tmp_path, {"kind": "pso", "seed": 1})
    assert load_config(path, seed=77).seed == 77
    assert main(["run", str(path), "--seed", "77", "--out", str(tmp_path / "o"), "--quiet"]) == 0
    assert json.loads((tmp_path / "o" / "manifest.json").read_text())["config"]["seed"] == 77


def test_sweep_seeds_are_materialised(tmp_path):
    cfg = load_config(write(tmp_path, {"kind": "sweep", "seed": 5}))
    assert cfg.params["seeds"] == list(range(5, 15))
    assert cfg.params["levels"][0] == 0.05


def test_topology_file_overrides_slots(tmp_path):
    (tmp_path / "slots.txt").write_text("80 50\n82 50\n")
    path = write(tmp_path, {"kind": "swarm", "topology": "slots.txt",
                            "swarm": {"delta_desired": 0.1, "max_steps": 3000}})
    assert main(["run", str(path), "--out", str(tmp_path / "o"), "--quiet"]) == 0
    rows = (tmp_path / "o" / "metrics.csv").read_text().splitlines()
    assert rows[0] == "step,delta,mean_v,beacon"
    assert float(rows[-1].split(",")[1]) == 0.1


def test_exit_codes(tmp_path, capsys):
    bad = write(tmp_path, {"kind": "swarm", "swarm": {"v_max": -1}})
    assert main(["run", str(bad)]) == 1
    assert "v_max" in capsys.readouterr().err
    # validation passes, but the graph file is missing at run time
    missing = write(tmp_path, {"kind": "route", "graph": "gone.txt",
                               "route": {"source": "A", "destination": "E"}}, "m.json")
    assert main(["run", str(missing), "--out", str(tmp_path / "o")]) == 2
    err = capsys.readouterr().err
    assert err.count("\n") == 1


def test_outputs_stay_in_output_dir(tmp_path):
    path = write(tmp_path, {"kind": "pso", "pso": {"iterations": 3}})
    before = set(tmp_path.iterdir())
    assert main(["run", str(path), "--out", str(tmp_path / "o"), "--quiet"]) == 0
    assert set(tmp_path.iterdir()) - before == {tmp_path / "o"}
    assert {p.name for p in (tmp_path / "o").iterdir()} == {"pso.csv", "manifest.json"}
