"""
**File:** ``scenarios.py``
**Region:** ``ds_tariff_equity_py_lib/common/stochastic``

Description
-----------
Finite scenario sets over a base market and the document format they are
read from.

A scenario document has the single top-level key ``scenarios``; each entry
carries ``name`` (optional), ``probability`` and ``overrides`` with any of
``renewable_output`` and ``backup_capacity`` (keyed by node index) and
``unit_capacity`` (keyed by unit id).

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.stochastic.scenarios import load_scenarios

    scenario_set = load_scenarios("data/scenarios_r25_r150.json", instance)
    print(scenario_set.dimension, [s.probability for s in scenario_set.scenarios])
"""

import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ds_common_logger_py_lib import Logger

from ..errors import ConfigError, ValidationError
from ..market.loader import check_keys, expect_key, expect_mapping, expect_number, expect_sequence, read_document
from ..market.models import MarketInstance
from ..market.validation import validate

logger = Logger.get_logger(__name__, package=True)

PROBABILITY_TOLERANCE = 1e-9
SCENARIO_KEYS = {"name", "probability", "overrides"}
OVERRIDE_KEYS = {"renewable_output", "backup_capacity", "unit_capacity"}


@dataclass(frozen=True, kw_only=True)
class Scenario:
    """One realisation of the random market quantities."""

    name: str
    probability: float
    renewable_output: dict[int, float] = field(default_factory=dict)
    backup_capacity: dict[int, float] = field(default_factory=dict)
    unit_capacity: dict[str, float] = field(default_factory=dict)

    def apply(self, base: MarketInstance) -> MarketInstance:
        return base.with_overrides(
            renewable_output=self.renewable_output,
            backup_capacity=self.backup_capacity,
            unit_capacity=self.unit_capacity,
        )


@dataclass(frozen=True, kw_only=True)
class ScenarioSet:
    """
    A finite distribution over perturbations of ``base``.

    Probabilities must be positive and add up to one; every perturbed
    instance must be valid.
    """

    base: MarketInstance
    scenarios: tuple[Scenario, ...]
    instances: tuple[MarketInstance, ...] = field(init=False)

    def __post_init__(self) -> None:
        if not self.scenarios:
            raise ValidationError(message="A scenario set needs at least one scenario")
        bad = [s.name for s in self.scenarios if not s.probability > 0]
        if bad:
            raise ValidationError(
                message=f"Scenario probabilities must be > 0: {bad}", details={"violations": bad}
            )
        total = math.fsum(s.probability for s in self.scenarios)
        if abs(total - 1.0) > PROBABILITY_TOLERANCE:
            raise ValidationError(
                message=f"Scenario probabilities sum to {total}, expected 1", details={"probability_sum": total}
            )
        known_units = {unit.id for unit in self.base.units}
        violations: list[str] = []
        instances = []
        for scenario in self.scenarios:
            unknown = sorted(set(scenario.unit_capacity) - known_units)
            if unknown:
                violations.append(f"scenario {scenario.name}: unknown unit(s) {unknown}")
            nodes = sorted(
                node
                for node in {*scenario.renewable_output, *scenario.backup_capacity}
                if self.base.prosumer_at(node) is None
            )
            if nodes:
                violations.append(f"scenario {scenario.name}: no prosumer group at node(s) {nodes}")
            instance = scenario.apply(self.base)
            violations.extend(f"scenario {scenario.name}: {v}" for v in validate(instance).violations)
            instances.append(instance)
        if violations:
            raise ValidationError(
                message=f"Invalid scenario set: {'; '.join(violations)}", details={"violations": violations}
            )
        object.__setattr__(self, "instances", tuple(instances))

    @property
    def dimension(self) -> int:
        """Number of distinct random quantities the scenarios perturb."""
        keys: set[tuple[str, Any]] = set()
        for s in self.scenarios:
            keys.update(("renewable_output", node) for node in s.renewable_output)
            keys.update(("backup_capacity", node) for node in s.backup_capacity)
            keys.update(("unit_capacity", unit) for unit in s.unit_capacity)
        return len(keys)

    @property
    def probabilities(self) -> list[float]:
        return [s.probability for s in self.scenarios]

    @classmethod
    def singleton(cls, base: MarketInstance) -> "ScenarioSet":
        """The deterministic case: ``base`` with probability one."""
        return cls(base=base, scenarios=(Scenario(name="base", probability=1.0),))


def scenarios_from_dict(data: Mapping[str, Any], base: MarketInstance) -> ScenarioSet:
    """Build a scenario set from a parsed scenario document."""
    data = expect_mapping(data, "document")
    check_keys(data, {"scenarios"}, "document")
    entries = expect_sequence(expect_key(data, "scenarios", "document"), "scenarios")
    scenarios: list[Scenario] = []
    for index, raw in enumerate(entries):
        where = f"scenarios[{index}]"
        entry = expect_mapping(raw, where)
        check_keys(entry, SCENARIO_KEYS, where)
        overrides = expect_mapping(entry.get("overrides", {}), f"{where}.overrides")
        check_keys(overrides, OVERRIDE_KEYS, f"{where}.overrides")
        scenarios.append(
            Scenario(
                name=str(entry.get("name", f"s{index}")),
                probability=expect_number(expect_key(entry, "probability", where), f"{where}.probability"),
                renewable_output=_node_values(overrides.get("renewable_output"), f"{where}.overrides.renewable_output"),
                backup_capacity=_node_values(overrides.get("backup_capacity"), f"{where}.overrides.backup_capacity"),
                unit_capacity={
                    str(unit): expect_number(value, f"{where}.overrides.unit_capacity.{unit}")
                    for unit, value in expect_mapping(
                        overrides.get("unit_capacity", {}), f"{where}.overrides.unit_capacity"
                    ).items()
                },
            )
        )
    return ScenarioSet(base=base, scenarios=tuple(scenarios))


def scenarios_to_dict(scenario_set: ScenarioSet) -> dict[str, Any]:
    """Inverse of ``scenarios_from_dict``; node keys are written as strings."""
    entries = []
    for s in scenario_set.scenarios:
        overrides: dict[str, Any] = {}
        if s.renewable_output:
            overrides["renewable_output"] = {str(k): v for k, v in s.renewable_output.items()}
        if s.backup_capacity:
            overrides["backup_capacity"] = {str(k): v for k, v in s.backup_capacity.items()}
        if s.unit_capacity:
            overrides["unit_capacity"] = dict(s.unit_capacity)
        entries.append({"name": s.name, "probability": s.probability, "overrides": overrides})
    return {"scenarios": entries}


def load_scenarios(path: str | Path, base: MarketInstance) -> ScenarioSet:
    """
    Read a scenario document (JSON, or YAML by suffix) over ``base``.

    Raises:
        ConfigError: If the document cannot be read or has unknown keys.
        ValidationError: If probabilities or perturbed instances are invalid.
    """
    scenario_set = scenarios_from_dict(read_document(path), base)
    logger.info(f"Loaded {len(scenario_set.scenarios)} scenario(s) from {path}")
    return scenario_set


def _node_values(raw: Any, where: str) -> dict[int, float]:
    if raw is None:
        return {}
    values: dict[int, float] = {}
    for key, value in expect_mapping(raw, where).items():
        try:
            node = int(key)
        except (TypeError, ValueError) as exc:
            raise ConfigError(message=f"{where}: node key {key!r} is not an integer", details={"path": where}) from exc
        values[node] = expect_number(value, f"{where}.{key}")
    return values
