import json
from pathlib import Path

import pytest

from snbif import parse_scenario

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def load_scenario(name):
    return parse_scenario((SCENARIOS / name).read_text())


def scenario_text(**kwargs):
    """Scenario JSON from keyword pieces, with a minimal valid default."""
    obj = {
        "base": {"kind": "autonomous", "frequencies": []},
        "rhs": {"shape": "cubic",
                "c0": {"mean": 0.0}, "c1": {"mean": 0.0},
                "c2": {"mean": 0.0}, "c3": {"mean": -1.0}},
        "family": "additive",
        "sweep": {"lambda_min": -1.0, "lambda_max": 1.0, "steps": 5},
    }
    obj.update(kwargs)
    return json.dumps(obj)


def make_scenario(**kwargs):
    return parse_scenario(scenario_text(**kwargs))


@pytest.fixture(scope="session")
def cubic_pinned():
    """x' = -x^3 + x + lambda on the trivial base, fast numerics."""
    return make_scenario(
        rhs={"shape": "cubic", "c0": {"mean": 0.0}, "c1": {"mean": 1.0},
             "c2": {"mean": 0.0}, "c3": {"mean": -1.0}},
        numerics={"pullback_T": 32, "birkhoff_T": 200, "grid_n": 4,
                  "bisect_tol": 1e-5})


@pytest.fixture(scope="session")
def pure_cubic():
    """x' = -x^3 + lambda on the trivial base."""
    return load_scenario("single_minimal_set.json")


@pytest.fixture(scope="session")
def deadzone_scenario():
    return load_scenario("deadzone.json")


@pytest.fixture(scope="session")
def qp_odd_linear():
    """x' = -x^3 + 0.2 cos(2 pi theta1) x + lambda x over the golden torus."""
    return make_scenario(
        base={"kind": "quasiperiodic", "frequencies": [1.0, 0.6180339887498949]},
        rhs={"shape": "cubic",
             "c0": {"mean": 0.0},
             "c1": {"mean": 0.0, "harmonics": [{"wave": [1, 0], "amplitude": 0.2}]},
             "c2": {"mean": 0.0}, "c3": {"mean": -1.0}},
        family="linear",
        numerics={"pullback_T": 32, "birkhoff_T": 400, "grid_n": 8})
