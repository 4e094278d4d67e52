"""
**File:** ``test_calibration.py``
**Region:** ``tests/common/market``

Description
-----------
Tests for building instances from survey-level parameters.
"""

from dataclasses import replace

import pytest

from ds_tariff_equity_py_lib.common.errors import CalibrationError
from ds_tariff_equity_py_lib.common.market.calibration import CalibrationSpec, calibrate
from ds_tariff_equity_py_lib.common.market.models import GenUnit


@pytest.fixture
def spec() -> CalibrationSpec:
    """Three income tiers with prosumers at the first node."""
    return CalibrationSpec(
        baseline_demand_low=0.020,
        group_scalings=(1.5, 1.25, 1.0),
        households_per_group=(15335.0, 23720.0, 25065.0),
        expenditure_share=0.015,
        reference_retail_price=120.0,
        demand_price_elasticity_at_reference=-0.3,
        solar_penetration=0.2,
        solar_capacity_per_household=8.0,
        backup_capacity=25.0,
        backup_cost_linear=30.0,
        backup_cost_quadratic=0.4,
        sunk_cost=5.0,
        node_names=("A", "B", "C"),
        units=(GenUnit(node=2, id="C1", cost_linear=20.0, cost_quadratic=0.01, capacity=500.0),),
        fixed_cost_target=80000.0,
    )


def test_vertical_intercept_from_elasticity(spec):
    """P0 = p_ref (1 - e) / (-e) = 520 at every node."""
    instance = calibrate(spec)

    assert [node.demand_vertical_intercept for node in instance.nodes] == pytest.approx([520.0] * 3)


def test_horizontal_intercepts_scale_with_tier(spec):
    """Q0 = households * baseline * scaling * (1 - e)."""
    instance = calibrate(spec)

    assert [node.demand_horizontal_intercept for node in instance.nodes] == pytest.approx(
        [598.065, 770.9, 651.69]
    )


def test_demand_at_reference_price_matches_baseline(spec):
    """The calibrated curve demands the baseline at the reference price."""
    node = calibrate(spec).nodes[1]

    slope = node.demand_vertical_intercept / node.demand_horizontal_intercept
    assert (node.demand_vertical_intercept - 120.0) / slope == pytest.approx(23720.0 * 0.025)


def test_prosumers_at_designated_node(spec):
    """Twenty percent of node A owns DER producing n * kW * hours / 1000 MWh/day."""
    instance = calibrate(spec)
    prosumers = instance.prosumer_at(0)

    assert instance.prosumer_nodes() == (0,)
    assert instance.nodes[0].prosumer_fraction == 0.2
    assert prosumers.households == pytest.approx(3067.0)
    assert prosumers.renewable_output == pytest.approx(3067.0 * 8.0 / 1000.0)
    assert instance.consumer_at(0).households == pytest.approx(15335.0 - 3067.0)
    assert instance.nodes[0].label == "A"


def test_incomes_follow_expenditure_share(spec):
    """Reference spend divided by the expenditure share, sunk cost included for prosumers."""
    instance = calibrate(spec)

    assert instance.consumer_at(0).income == pytest.approx(120.0 * 0.03 / 0.015)
    assert instance.prosumer_at(0).income == pytest.approx((120.0 * 0.03 + 5.0) / 0.015)
    assert instance.consumer_at(2).income == pytest.approx(160.0)


@pytest.mark.parametrize(
    ("change", "problem"),
    [
        ({"expenditure_share": 1.5}, "expenditure_share must lie in (0, 1)"),
        ({"demand_price_elasticity_at_reference": 0.2}, "demand_price_elasticity_at_reference must be < 0"),
        ({"demand_price_elasticity_at_reference": 0.0}, "demand_price_elasticity_at_reference must be < 0"),
        ({"solar_penetration": 0.0}, "solar_penetration must lie in (0, 1]"),
        ({"households_per_group": (1.0, 2.0)}, "group_scalings and households_per_group must have the same length"),
        ({"prosumer_node": 5}, "prosumer_node 5 does not exist"),
        ({"baseline_demand_low": 0.0}, "baseline_demand_low must be > 0"),
    ],
)
def test_inconsistent_spec_is_rejected(spec, change, problem):
    """Every inconsistent parameter is named in the error."""
    with pytest.raises(CalibrationError) as exc_info:
        calibrate(replace(spec, **change))

    assert problem in exc_info.value.details["problems"]
