"""
**File:** ``__init__.py``
**Region:** ``ds_tariff_equity_py_lib/common/market``

Description
-----------
Domain types, demand and cost primitives, validation, calibration and
document loading for market instances.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.market import load_market, validate

    instance = load_market("data/three_node.json")
    assert validate(instance).is_valid
"""

from .calibration import CalibrationSpec, calibrate
from .demand import (
    backup_cost,
    consumer_quantity,
    generation_cost,
    gross_benefit,
    inverse_demand_consumer,
    inverse_demand_prosumer,
    marginal_cost,
    prosumer_quantity,
)
from .enums import EnergyUnit, EquityMeasure, GroupKind, MoneyUnit
from .loader import (
    calibration_from_dict,
    instance_from_dict,
    instance_to_dict,
    load_market,
    read_document,
)
from .models import ConsumerGroup, GenUnit, MarketInstance, Network, Node, ProsumerGroup
from .validation import ValidationReport, ensure_valid, validate

__all__ = [
    "CalibrationSpec",
    "ConsumerGroup",
    "EnergyUnit",
    "EquityMeasure",
    "GenUnit",
    "GroupKind",
    "MarketInstance",
    "MoneyUnit",
    "Network",
    "Node",
    "ProsumerGroup",
    "ValidationReport",
    "backup_cost",
    "calibrate",
    "calibration_from_dict",
    "consumer_quantity",
    "ensure_valid",
    "generation_cost",
    "gross_benefit",
    "instance_from_dict",
    "instance_to_dict",
    "inverse_demand_consumer",
    "inverse_demand_prosumer",
    "load_market",
    "marginal_cost",
    "prosumer_quantity",
    "read_document",
    "validate",
]
