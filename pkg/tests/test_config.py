import json

import numpy as np
import pytest

from hardwall.config import COMMANDS, ConfigError, config_from_dict, load_config, parse_grid


def test_grids():
    assert np.array_equal(parse_grid([1, 2, 3], "x"), [1.0, 2.0, 3.0])
    assert parse_grid({"linspace": [0, 1, 5]}, "x")[2] == 0.5
    assert parse_grid({"geomspace": [1, 100, 3]}, "x")[1] == pytest.approx(10)
    for bad in ([], [1, 1], {"linspace": [0, 1]}, {"arange": [0, 1, 2]}, "0:1", [0, float("nan")]):
        with pytest.raises(ConfigError):
            parse_grid(bad, "x")


def test_defaults_and_sha():
    cfg = config_from_dict({"command": "equilibrium"})
    assert cfg.potential == "ginibre" and cfg.N == [100] and cfg.rho_star == 0.8
    other = config_from_dict({"command": "equilibrium", "N": 100})
    assert cfg.sha256() != other.sha256()
    assert cfg.sha256() == config_from_dict({"command": "equilibrium"}).sha256()


@pytest.mark.parametrize(
    "bad",
    [
        {"command": "nope"},
        {"command": "norms", "extra": 1},
        {"command": "norms", "N": [100, 50]},
        {"command": "norms", "N": 1},
        {"command": "norms", "alpha": -1},
        {"command": "norms", "rho_star": -0.5},
        {"command": "norms", "rho_star": None},
        {"command": "sample", "seed": -3},
        {"command": "sample", "count": 0},
        {"command": "norms", "tol": 2},
        {"command": "norms", "potential": "mystery"},
        {"command": "norms", "h": "bumpy"},
        {"command": "norms", "grids": {"x": [2, 1]}},
    ],
)
def test_rejects(bad):
    with pytest.raises(ConfigError):
        config_from_dict(bad)


def test_free_profile_allows_missing_wall():
    cfg = config_from_dict({"command": "profile", "rho_star": None})
    assert cfg.rho_star is None


def test_subcommand_mismatch(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"command": "norms"}))
    assert load_config(p).command == "norms"
    assert load_config(p, "norms").command == "norms"
    with pytest.raises(ConfigError):
        load_config(p, "kernel")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")


def test_potential_with_params():
    cfg = config_from_dict({"command": "equilibrium", "potential": {"name": "power", "params": {"coef": 1, "exponent": 4}}, "h": {"poly": [0.1]}})
    assert cfg.build_potential().q(np.array(1.0)) == pytest.approx(1.0)
    assert cfg.build_h()(np.array(0.8)) == 0.0


def test_all_commands_known():
    for c in COMMANDS:
        config_from_dict({"command": c})
