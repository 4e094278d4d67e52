"""
**File:** ``conftest.py``
**Region:** ``tests``

Description
-----------
Shared pytest fixtures: the closed-form single-node market, a small two-node
market with prosumers, the calibrated three-node study and its scenario set.
"""

import tempfile
from pathlib import Path

import pytest

from ds_tariff_equity_py_lib.common.market.loader import load_market
from ds_tariff_equity_py_lib.common.market.models import (
    ConsumerGroup,
    GenUnit,
    MarketInstance,
    Network,
    Node,
    ProsumerGroup,
)
from ds_tariff_equity_py_lib.common.market.validation import ensure_valid
from ds_tariff_equity_py_lib.common.stochastic.scenarios import load_scenarios
from ds_tariff_equity_py_lib.common.verification.generators import single_node_instance

DATA_DIR = Path(__file__).resolve().parents[1] / "data"


@pytest.fixture
def temp_dir():
    """Create a temporary output directory."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture(scope="session")
def data_dir() -> Path:
    """Directory of the shipped instance and scenario documents."""
    return DATA_DIR


@pytest.fixture
def single_node() -> MarketInstance:
    """P0 = 100, Q0 = 1000, a = 10, A = 0.05, G = 1000: clears at d = 600, p = 40."""
    return single_node_instance(100.0, 1000.0, 10.0, 0.05, 1000.0, households=1000.0, income=100.0)


@pytest.fixture
def two_node() -> MarketInstance:
    """Two nodes joined by one line, prosumers at node 0, cost target 2000 $/day."""
    return ensure_valid(
        MarketInstance(
            nodes=(
                Node(
                    id=0,
                    name="N0",
                    demand_vertical_intercept=120.0,
                    demand_horizontal_intercept=200.0,
                    prosumer_fraction=0.25,
                ),
                Node(id=1, name="N1", demand_vertical_intercept=100.0, demand_horizontal_intercept=150.0),
            ),
            consumers=(
                ConsumerGroup(node=0, households=3000.0, income=120.0),
                ConsumerGroup(node=1, households=2000.0, income=80.0),
            ),
            prosumers=(
                ProsumerGroup(
                    node=0,
                    households=1000.0,
                    income=180.0,
                    renewable_output=20.0,
                    backup_capacity=10.0,
                    backup_cost_linear=25.0,
                    backup_cost_quadratic=0.5,
                    sunk_cost=2.0,
                ),
            ),
            units=(
                GenUnit(node=0, id="U0", cost_linear=30.0, cost_quadratic=0.1, capacity=150.0),
                GenUnit(node=1, id="U1", cost_linear=15.0, cost_quadratic=0.05, capacity=200.0),
            ),
            network=Network(ptdf=((1.0, 0.0),), limits=(40.0,)),
            fixed_cost_target=2000.0,
        )
    )


@pytest.fixture(scope="session")
def calibrated() -> MarketInstance:
    """The calibrated three-node study, R about 24.5 MWh/day at node A."""
    return load_market(DATA_DIR / "three_node.json")


@pytest.fixture(scope="session")
def calibrated_r25(calibrated) -> MarketInstance:
    """Calibrated study with R = 25 MWh/day: prosumers buy on net."""
    return calibrated.with_overrides(renewable_output={0: 25.0})


@pytest.fixture(scope="session")
def calibrated_r150(calibrated) -> MarketInstance:
    """Calibrated study with R = 150 MWh/day: prosumers sell on net."""
    return calibrated.with_overrides(renewable_output={0: 150.0})


@pytest.fixture(scope="session")
def scenario_set_r25_r150(calibrated):
    """Two equally likely renewable outcomes, R in {25, 150} MWh/day."""
    return load_scenarios(DATA_DIR / "scenarios_r25_r150.json", calibrated)
