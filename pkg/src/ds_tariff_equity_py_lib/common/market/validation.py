"""
**File:** ``validation.py``
**Region:** ``ds_tariff_equity_py_lib/common/market``

Description
-----------
Invariant checks for market instances. Violations are returned as data;
:func:`ensure_valid` turns a non-empty report into a ``ValidationError``.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.market.validation import validate

    report = validate(instance)
    if not report.is_valid:
        print(report.violations)
"""

import math
from collections import Counter
from dataclasses import dataclass, field

from ds_common_logger_py_lib import Logger

from ..errors import ValidationError
from .models import MarketInstance

logger = Logger.get_logger(__name__, package=True)


@dataclass(kw_only=True)
class ValidationReport:
    """Violations found in an instance, empty when valid."""

    violations: list[str] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations


def validate(instance: MarketInstance) -> ValidationReport:
    """Check every type invariant of ``instance``."""
    violations: list[str] = []
    n = instance.n_nodes

    if n == 0:
        violations.append("instance has no nodes")
    for position, node in enumerate(instance.nodes):
        where = f"node {node.id}"
        if node.id != position:
            violations.append(f"{where}: id must equal its position {position}")
        if not node.demand_vertical_intercept > 0:
            violations.append(f"{where}: demand_vertical_intercept must be > 0")
        if not node.demand_horizontal_intercept > 0:
            violations.append(f"{where}: demand_horizontal_intercept must be > 0")
        if not 0.0 <= node.prosumer_fraction <= 1.0:
            violations.append(f"{where}: prosumer_fraction must lie in [0, 1]")

    violations.extend(_group_violations(instance))

    for unit, count in Counter(unit.id for unit in instance.units).items():
        if count > 1:
            violations.append(f"unit {unit}: id is not unique")
    for unit in instance.units:
        where = f"unit {unit.id}"
        if not 0 <= unit.node < n:
            violations.append(f"{where}: node {unit.node} does not exist")
        if not unit.cost_linear > 0:
            violations.append(f"{where}: cost_linear must be > 0")
        if not unit.cost_quadratic > 0:
            violations.append(f"{where}: cost_quadratic must be > 0")
        if not unit.capacity >= 0:
            violations.append(f"{where}: capacity must be >= 0")

    network = instance.network
    if len(network.ptdf) != network.lines:
        violations.append(f"network: ptdf has {len(network.ptdf)} rows but {network.lines} limits")
    for k, row in enumerate(network.ptdf):
        if len(row) != n:
            violations.append(f"network: ptdf row {k} has {len(row)} entries, expected {n}")
        if not all(math.isfinite(value) for value in row):
            violations.append(f"network: ptdf row {k} has non-finite entries")
    for k, limit in enumerate(network.limits):
        if not limit >= 0:
            violations.append(f"line {k}: limit T_k must be >= 0")

    if not instance.fixed_cost_target >= 0:
        violations.append("fixed_cost_target must be >= 0")
    if instance.equity_weight is not None and not instance.equity_weight >= 0:
        violations.append("equity_weight must be >= 0")
    if instance.tau_buy_max is not None and not instance.tau_buy_max >= 0:
        violations.append("tariff_box: tau_buy_max must be >= 0")
    if instance.tau_sell_min is not None and instance.tau_buy_max is not None:
        if instance.tau_sell_min > instance.tau_buy_max:
            violations.append("tariff_box: tau_sell_min must not exceed tau_buy_max")

    if violations:
        logger.debug(f"Instance validation found {len(violations)} violation(s)")
    return ValidationReport(violations=violations)


def ensure_valid(instance: MarketInstance) -> MarketInstance:
    """Return ``instance`` or raise ``ValidationError`` listing every violation."""
    report = validate(instance)
    if not report.is_valid:
        raise ValidationError(
            message=f"Invalid market instance: {'; '.join(report.violations)}",
            details={"violations": report.violations},
        )
    return instance


def _group_violations(instance: MarketInstance) -> list[str]:
    violations: list[str] = []
    n = instance.n_nodes
    for kind, groups in (("consumer", instance.consumers), ("prosumer", instance.prosumers)):
        for node, count in Counter(group.node for group in groups).items():
            if count > 1:
                violations.append(f"node {node}: more than one {kind} group")
        for group in groups:
            if not 0 <= group.node < n:
                violations.append(f"{kind} group: node {group.node} does not exist")
            if not group.households >= 0:
                violations.append(f"{kind} group at node {group.node}: households must be >= 0")
            if group.households > 0 and not group.income > 0:
                violations.append(f"{kind} group at node {group.node}: income must be > 0")

    for group in instance.prosumers:
        where = f"prosumer group at node {group.node}"
        if not group.renewable_output >= 0:
            violations.append(f"{where}: renewable_output must be >= 0")
        if not group.backup_capacity >= 0:
            violations.append(f"{where}: backup_capacity must be >= 0")
        if not (group.backup_cost_linear >= 0 and group.backup_cost_quadratic >= 0):
            violations.append(f"{where}: backup cost coefficients must be >= 0")
        if group.backup_capacity > 0 and not group.backup_cost_quadratic > 0:
            violations.append(f"{where}: backup_cost_quadratic must be > 0 when backup_capacity > 0")
        if not group.sunk_cost >= 0:
            violations.append(f"{where}: sunk_cost must be >= 0")

    for node in instance.nodes:
        consumer = instance.consumer_at(node.id)
        prosumer = instance.prosumer_at(node.id)
        if node.has_consumers and consumer is None:
            violations.append(f"node {node.id}: prosumer_fraction < 1 requires a consumer group")
        if node.has_prosumers and prosumer is None:
            violations.append(f"node {node.id}: prosumer_fraction > 0 requires a prosumer group")
        if not node.has_consumers and consumer is not None and consumer.populated:
            violations.append(f"node {node.id}: prosumer_fraction = 1 with a populated consumer group")
        if not node.has_prosumers and prosumer is not None and prosumer.populated:
            violations.append(f"node {node.id}: prosumer_fraction = 0 with a populated prosumer group")
        populated = (consumer is not None and consumer.populated) or (prosumer is not None and prosumer.populated)
        if not populated:
            violations.append(f"node {node.id}: neither consumer nor prosumer group is populated")
    return violations
