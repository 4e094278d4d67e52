"""
**File:** ``loader.py``
**Region:** ``ds_tariff_equity_py_lib/common/market``

Description
-----------
Read instance and calibration documents (JSON, or YAML by suffix), convert
declared units to MWh and dollars, and reject unknown keys.

An instance document has the top-level keys ``nodes``, ``consumers``,
``prosumers``, ``units``, ``network``, ``fixed_cost_target``,
``equity_weight``, ``equity_measure``, ``tariff_box`` and
``units_of_measure``. A calibration document has the single top-level key
``calibration``.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.market.loader import load_market

    instance = load_market("data/three_node.json")
"""

import json
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml
from ds_common_logger_py_lib import Logger

from ..errors import ConfigError, TariffEquityException
from .calibration import CalibrationSpec, calibrate
from .enums import EnergyUnit, EquityMeasure, MoneyUnit
from .models import ConsumerGroup, GenUnit, MarketInstance, Network, Node, ProsumerGroup
from .validation import ensure_valid

logger = Logger.get_logger(__name__, package=True)

INSTANCE_KEYS = {
    "nodes",
    "consumers",
    "prosumers",
    "units",
    "network",
    "fixed_cost_target",
    "equity_weight",
    "equity_measure",
    "tariff_box",
    "units_of_measure",
}
NODE_KEYS = {"id", "name", "demand_vertical_intercept", "demand_horizontal_intercept", "prosumer_fraction"}
CONSUMER_KEYS = {"node", "households", "income"}
PROSUMER_KEYS = {
    "node",
    "households",
    "income",
    "renewable_output",
    "backup_capacity",
    "backup_cost_linear",
    "backup_cost_quadratic",
    "sunk_cost",
}
UNIT_KEYS = {"node", "id", "cost_linear", "cost_quadratic", "capacity"}
NETWORK_KEYS = {"ptdf", "limits"}
BOX_KEYS = {"tau_buy_max", "tau_sell_min"}
UNITS_OF_MEASURE_KEYS = {"energy", "money"}
CALIBRATION_KEYS = {
    "baseline_demand_low",
    "group_scalings",
    "households_per_group",
    "expenditure_share",
    "reference_retail_price",
    "demand_price_elasticity_at_reference",
    "solar_penetration",
    "solar_capacity_per_household",
    "prosumer_node",
    "solar_full_load_hours",
    "backup_capacity",
    "backup_cost_linear",
    "backup_cost_quadratic",
    "sunk_cost",
    "node_names",
    "units",
    "network",
    "fixed_cost_target",
    "equity_weight",
    "equity_measure",
    "units_of_measure",
}


@dataclass(frozen=True)
class _Scale:
    """Conversion of document units into MWh and dollars."""

    energy: float = 1.0
    money: float = 1.0

    def quantity(self, value: Any, where: str) -> float:
        return expect_number(value, where) * self.energy

    def price(self, value: Any, where: str) -> float:
        return expect_number(value, where) * self.money / self.energy

    def quadratic(self, value: Any, where: str) -> float:
        return expect_number(value, where) * self.money / self.energy**2

    def amount(self, value: Any, where: str) -> float:
        return expect_number(value, where) * self.money


def read_document(path: str | Path) -> dict[str, Any]:
    """
    Parse a JSON or YAML document into a mapping.

    Raises:
        ConfigError: If the file is missing, unparsable or not a mapping.
    """
    path = Path(path)
    try:
        with path.open() as f:
            if path.suffix.lower() in (".yaml", ".yml"):
                data = yaml.safe_load(f)
            else:
                data = json.load(f)
    except Exception as exc:
        raise ConfigError(
            message=f"Failed to read {path}: {exc}",
            details={"path": str(path), "error": str(exc)},
        ) from exc
    if not isinstance(data, dict):
        raise ConfigError(message=f"{path} must contain a mapping at the top level", details={"path": str(path)})
    logger.debug(f"Read document {path} with keys {sorted(data)}")
    return data


def load_market(path: str | Path) -> MarketInstance:
    """Load an instance document, or calibrate from a calibration document."""
    data = read_document(path)
    try:
        if "calibration" in data:
            check_keys(data, {"calibration"}, "document")
            return calibrate(calibration_from_dict(expect_mapping(data["calibration"], "calibration")))
        return instance_from_dict(data)
    except TariffEquityException:
        raise
    except Exception as exc:
        raise ConfigError(message=f"Failed to load {path}: {exc}", details={"path": str(path)}) from exc


def instance_from_dict(data: Mapping[str, Any]) -> MarketInstance:
    """Build and validate an instance from a parsed document."""
    check_keys(data, INSTANCE_KEYS, "document")
    for required in ("nodes", "units", "fixed_cost_target"):
        if required not in data:
            raise ConfigError(message=f"document: missing required key '{required}'", details={"key": required})
    scale = _scale(data.get("units_of_measure"))

    nodes = []
    for position, raw in enumerate(expect_sequence(data["nodes"], "nodes")):
        where = f"nodes[{position}]"
        raw = expect_mapping(raw, where)
        check_keys(raw, NODE_KEYS, where)
        nodes.append(
            Node(
                id=int(expect_number(raw.get("id", position), f"{where}.id")),
                name=str(raw["name"]) if raw.get("name") is not None else None,
                demand_vertical_intercept=scale.price(
                    expect_key(raw, "demand_vertical_intercept", where), f"{where}.demand_vertical_intercept"
                ),
                demand_horizontal_intercept=scale.quantity(
                    expect_key(raw, "demand_horizontal_intercept", where), f"{where}.demand_horizontal_intercept"
                ),
                prosumer_fraction=expect_number(raw.get("prosumer_fraction", 0.0), f"{where}.prosumer_fraction"),
            )
        )

    consumers = []
    for position, raw in enumerate(expect_sequence(data.get("consumers", []), "consumers")):
        where = f"consumers[{position}]"
        raw = expect_mapping(raw, where)
        check_keys(raw, CONSUMER_KEYS, where)
        consumers.append(
            ConsumerGroup(
                node=int(expect_number(expect_key(raw, "node", where), f"{where}.node")),
                households=expect_number(expect_key(raw, "households", where), f"{where}.households"),
                income=scale.amount(expect_key(raw, "income", where), f"{where}.income"),
            )
        )

    prosumers = []
    for position, raw in enumerate(expect_sequence(data.get("prosumers", []), "prosumers")):
        where = f"prosumers[{position}]"
        raw = expect_mapping(raw, where)
        check_keys(raw, PROSUMER_KEYS, where)
        prosumers.append(
            ProsumerGroup(
                node=int(expect_number(expect_key(raw, "node", where), f"{where}.node")),
                households=expect_number(expect_key(raw, "households", where), f"{where}.households"),
                income=scale.amount(expect_key(raw, "income", where), f"{where}.income"),
                renewable_output=scale.quantity(raw.get("renewable_output", 0.0), f"{where}.renewable_output"),
                backup_capacity=scale.quantity(raw.get("backup_capacity", 0.0), f"{where}.backup_capacity"),
                backup_cost_linear=scale.price(raw.get("backup_cost_linear", 0.0), f"{where}.backup_cost_linear"),
                backup_cost_quadratic=scale.quadratic(
                    raw.get("backup_cost_quadratic", 0.0), f"{where}.backup_cost_quadratic"
                ),
                sunk_cost=scale.amount(raw.get("sunk_cost", 0.0), f"{where}.sunk_cost"),
            )
        )

    box = expect_mapping(data.get("tariff_box", {}), "tariff_box")
    check_keys(box, BOX_KEYS, "tariff_box")
    instance = MarketInstance(
        nodes=tuple(nodes),
        consumers=tuple(consumers),
        prosumers=tuple(prosumers),
        units=_units(data["units"], scale, "units"),
        network=_network(data.get("network", {}), scale),
        fixed_cost_target=scale.amount(data["fixed_cost_target"], "fixed_cost_target"),
        equity_weight=expect_optional_number(data.get("equity_weight"), "equity_weight"),
        equity_measure=_equity_measure(data.get("equity_measure")),
        tau_buy_max=None if box.get("tau_buy_max") is None else scale.price(box["tau_buy_max"], "tau_buy_max"),
        tau_sell_min=None if box.get("tau_sell_min") is None else scale.price(box["tau_sell_min"], "tau_sell_min"),
    )
    return ensure_valid(instance)


def calibration_from_dict(data: Mapping[str, Any]) -> CalibrationSpec:
    """Build a calibration spec from the ``calibration`` section of a document."""
    check_keys(data, CALIBRATION_KEYS, "calibration")
    scale = _scale(data.get("units_of_measure"))
    where = "calibration"
    return CalibrationSpec(
        baseline_demand_low=scale.quantity(expect_key(data, "baseline_demand_low", where), "baseline_demand_low"),
        group_scalings=tuple(
            expect_number(value, "group_scalings")
            for value in expect_sequence(expect_key(data, "group_scalings", where), where)
        ),
        households_per_group=tuple(
            expect_number(value, "households_per_group")
            for value in expect_sequence(expect_key(data, "households_per_group", where), where)
        ),
        expenditure_share=expect_number(expect_key(data, "expenditure_share", where), "expenditure_share"),
        reference_retail_price=scale.price(expect_key(data, "reference_retail_price", where), "reference_retail_price"),
        demand_price_elasticity_at_reference=expect_number(
            expect_key(data, "demand_price_elasticity_at_reference", where), "demand_price_elasticity_at_reference"
        ),
        solar_penetration=expect_number(expect_key(data, "solar_penetration", where), "solar_penetration"),
        solar_capacity_per_household=expect_number(
            expect_key(data, "solar_capacity_per_household", where), "solar_capacity_per_household"
        ),
        prosumer_node=int(expect_number(data.get("prosumer_node", 0), "prosumer_node")),
        solar_full_load_hours=expect_number(data.get("solar_full_load_hours", 1.0), "solar_full_load_hours"),
        backup_capacity=scale.quantity(data.get("backup_capacity", 0.0), "backup_capacity"),
        backup_cost_linear=scale.price(data.get("backup_cost_linear", 0.0), "backup_cost_linear"),
        backup_cost_quadratic=scale.quadratic(data.get("backup_cost_quadratic", 0.0), "backup_cost_quadratic"),
        sunk_cost=scale.amount(data.get("sunk_cost", 0.0), "sunk_cost"),
        node_names=tuple(str(name) for name in expect_sequence(data.get("node_names", []), "node_names")),
        units=_units(data.get("units", []), scale, "calibration.units"),
        network=_network(data.get("network", {}), scale),
        fixed_cost_target=scale.amount(data.get("fixed_cost_target", 0.0), "fixed_cost_target"),
        equity_weight=expect_optional_number(data.get("equity_weight"), "equity_weight"),
        equity_measure=_equity_measure(data.get("equity_measure")),
    )


def instance_to_dict(instance: MarketInstance) -> dict[str, Any]:
    """Canonical instance document in MWh and dollars."""
    document: dict[str, Any] = {
        "units_of_measure": {"energy": EnergyUnit.MWH.value, "money": MoneyUnit.DOLLAR.value},
        "nodes": [
            {
                "id": node.id,
                **({"name": node.name} if node.name else {}),
                "demand_vertical_intercept": node.demand_vertical_intercept,
                "demand_horizontal_intercept": node.demand_horizontal_intercept,
                "prosumer_fraction": node.prosumer_fraction,
            }
            for node in instance.nodes
        ],
        "consumers": [
            {"node": group.node, "households": group.households, "income": group.income}
            for group in instance.consumers
        ],
        "prosumers": [
            {
                "node": group.node,
                "households": group.households,
                "income": group.income,
                "renewable_output": group.renewable_output,
                "backup_capacity": group.backup_capacity,
                "backup_cost_linear": group.backup_cost_linear,
                "backup_cost_quadratic": group.backup_cost_quadratic,
                "sunk_cost": group.sunk_cost,
            }
            for group in instance.prosumers
        ],
        "units": [
            {
                "node": unit.node,
                "id": unit.id,
                "cost_linear": unit.cost_linear,
                "cost_quadratic": unit.cost_quadratic,
                "capacity": unit.capacity,
            }
            for unit in instance.units
        ],
        "network": {"ptdf": [list(row) for row in instance.network.ptdf], "limits": list(instance.network.limits)},
        "fixed_cost_target": instance.fixed_cost_target,
        "equity_measure": instance.equity_measure.value,
    }
    if instance.equity_weight is not None:
        document["equity_weight"] = instance.equity_weight
    box = {
        key: value
        for key, value in (("tau_buy_max", instance.tau_buy_max), ("tau_sell_min", instance.tau_sell_min))
        if value is not None
    }
    if box:
        document["tariff_box"] = box
    return document


def _units(raw_units: Any, scale: _Scale, name: str) -> tuple[GenUnit, ...]:
    units = []
    for position, raw in enumerate(expect_sequence(raw_units, name)):
        where = f"{name}[{position}]"
        raw = expect_mapping(raw, where)
        check_keys(raw, UNIT_KEYS, where)
        units.append(
            GenUnit(
                node=int(expect_number(expect_key(raw, "node", where), f"{where}.node")),
                id=str(raw.get("id", f"U{position}")),
                cost_linear=scale.price(expect_key(raw, "cost_linear", where), f"{where}.cost_linear"),
                cost_quadratic=scale.quadratic(expect_key(raw, "cost_quadratic", where), f"{where}.cost_quadratic"),
                capacity=scale.quantity(expect_key(raw, "capacity", where), f"{where}.capacity"),
            )
        )
    return tuple(units)


def _network(raw: Any, scale: _Scale) -> Network:
    raw = expect_mapping(raw, "network")
    check_keys(raw, NETWORK_KEYS, "network")
    ptdf = tuple(
        tuple(expect_number(value, f"network.ptdf[{k}]") for value in expect_sequence(row, f"network.ptdf[{k}]"))
        for k, row in enumerate(expect_sequence(raw.get("ptdf", []), "network.ptdf"))
    )
    limits = tuple(
        scale.quantity(value, "network.limits") for value in expect_sequence(raw.get("limits", []), "network.limits")
    )
    return Network(ptdf=ptdf, limits=limits)


def _scale(raw: Any) -> _Scale:
    if raw is None:
        return _Scale()
    raw = expect_mapping(raw, "units_of_measure")
    check_keys(raw, UNITS_OF_MEASURE_KEYS, "units_of_measure")
    try:
        energy = EnergyUnit(raw.get("energy", EnergyUnit.MWH.value))
        money = MoneyUnit(raw.get("money", MoneyUnit.DOLLAR.value))
    except ValueError as exc:
        raise ConfigError(message=f"units_of_measure: {exc}", details={"units_of_measure": dict(raw)}) from exc
    return _Scale(energy=energy.to_mwh, money=money.to_dollar)


def _equity_measure(raw: Any) -> EquityMeasure:
    if raw is None:
        return EquityMeasure.ALL_GROUPS
    try:
        return EquityMeasure(raw)
    except ValueError as exc:
        raise ConfigError(message=f"equity_measure: {exc}", details={"equity_measure": raw}) from exc


def check_keys(data: Mapping[str, Any], allowed: set[str], where: str) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(message=f"{where}: unknown key(s) {unknown}", details={"path": where, "unknown": unknown})


def expect_key(data: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in data:
        raise ConfigError(message=f"{where}: missing required key '{key}'", details={"path": where, "key": key})
    return data[key]


def expect_mapping(value: Any, where: str) -> Mapping[str, Any]:
    if not isinstance(value, Mapping):
        raise ConfigError(message=f"{where}: expected a mapping", details={"path": where})
    return value


def expect_sequence(value: Any, where: str) -> list[Any]:
    if not isinstance(value, list | tuple):
        raise ConfigError(message=f"{where}: expected a list", details={"path": where})
    return list(value)


def expect_number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, int | float):
        raise ConfigError(message=f"{where}: expected a number, got {value!r}", details={"path": where})
    return float(value)


def expect_optional_number(value: Any, where: str) -> float | None:
    return None if value is None else expect_number(value, where)
