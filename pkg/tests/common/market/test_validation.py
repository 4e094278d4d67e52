"""
**File:** ``test_validation.py``
**Region:** ``tests/common/market``

Description
-----------
Tests for instance invariant checks.
"""

from dataclasses import replace

import pytest

from ds_tariff_equity_py_lib.common.errors import ValidationError
from ds_tariff_equity_py_lib.common.market.models import ConsumerGroup, GenUnit, Network, Node
from ds_tariff_equity_py_lib.common.market.validation import ensure_valid, validate


def test_valid_instances_have_no_violations(single_node, two_node, calibrated):
    """Fixtures and the calibrated study are valid."""
    for instance in (single_node, two_node, calibrated):
        assert validate(instance).is_valid


@pytest.mark.parametrize(
    ("change", "expected"),
    [
        (
            {"nodes": (Node(id=0, demand_vertical_intercept=0.0, demand_horizontal_intercept=1000.0),)},
            "node 0: demand_vertical_intercept must be > 0",
        ),
        (
            {"nodes": (Node(id=1, demand_vertical_intercept=100.0, demand_horizontal_intercept=1000.0),)},
            "node 1: id must equal its position 0",
        ),
        (
            {"units": (GenUnit(node=0, id="G1", cost_linear=0.0, cost_quadratic=0.05, capacity=1000.0),)},
            "unit G1: cost_linear must be > 0",
        ),
        (
            {"units": (GenUnit(node=0, id="G1", cost_linear=10.0, cost_quadratic=0.05, capacity=-1.0),)},
            "unit G1: capacity must be >= 0",
        ),
        (
            {"consumers": (ConsumerGroup(node=0, households=1000.0, income=0.0),)},
            "consumer group at node 0: income must be > 0",
        ),
        ({"fixed_cost_target": -1.0}, "fixed_cost_target must be >= 0"),
        ({"equity_weight": -5.0}, "equity_weight must be >= 0"),
        (
            {"network": Network(ptdf=((1.0,),), limits=(-1.0,))},
            "line 0: limit T_k must be >= 0",
        ),
    ],
)
def test_single_violation_is_reported(single_node, change, expected):
    """Each broken invariant is reported with its location."""
    report = validate(replace(single_node, **change))

    assert not report.is_valid
    assert expected in report.violations


def test_ptdf_shape_mismatch(single_node):
    """PTDF rows must have one entry per node and match the limits."""
    report = validate(replace(single_node, network=Network(ptdf=((1.0, 0.0),), limits=())))

    assert "network: ptdf has 1 rows but 0 limits" in report.violations
    assert "network: ptdf row 0 has 2 entries, expected 1" in report.violations


def test_prosumer_share_requires_prosumer_group(single_node):
    """A positive prosumer fraction needs a prosumer group at the node."""
    node = replace(single_node.nodes[0], prosumer_fraction=0.2)

    report = validate(replace(single_node, nodes=(node,)))

    assert "node 0: prosumer_fraction > 0 requires a prosumer group" in report.violations


def test_backup_capacity_requires_strict_convexity(two_node):
    """Backup capacity with a zero quadratic cost is rejected."""
    group = replace(two_node.prosumers[0], backup_cost_quadratic=0.0)

    report = validate(replace(two_node, prosumers=(group,)))

    assert "prosumer group at node 0: backup_cost_quadratic must be > 0 when backup_capacity > 0" in report.violations


def test_tariff_box_order(single_node):
    """tau_sell_min may not exceed tau_buy_max."""
    report = validate(replace(single_node, tau_buy_max=10.0, tau_sell_min=20.0))

    assert "tariff_box: tau_sell_min must not exceed tau_buy_max" in report.violations


def test_ensure_valid_raises_with_every_violation(single_node):
    """ensure_valid lists all violations in the error details."""
    broken = replace(single_node, fixed_cost_target=-1.0, equity_weight=-1.0)

    with pytest.raises(ValidationError, match="Invalid market instance") as exc_info:
        ensure_valid(broken)

    assert len(exc_info.value.details["violations"]) == 2
    assert exc_info.value.exit_code == 2


def test_ensure_valid_returns_instance(single_node):
    """A valid instance is returned unchanged."""
    assert ensure_valid(single_node) is single_node
