"""
**File:** ``calibration.py``
**Region:** ``ds_tariff_equity_py_lib/common/market``

Description
-----------
Build a market instance from household-level survey parameters.

Each node hosts one income tier. Per-household baseline demand is the
low-income baseline times the tier scaling. The linear demand curve of a node
is anchored so that at the reference retail price the aggregate quantity equals
the baseline and the point elasticity equals the configured value:

- ``Q0 = q_ref * (1 - e)``
- ``P0 = p_ref * (1 - e) / (-e)``

Incomes follow from the expenditure share at the reference price. Prosumers
(the DER-owning share of the designated node) also carry their sunk DER cost in
the reference spend.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.market.calibration import calibrate

    instance = calibrate(spec)
"""

from dataclasses import dataclass, field

from ds_common_logger_py_lib import Logger

from ..errors import CalibrationError
from .enums import EquityMeasure
from .models import ConsumerGroup, GenUnit, MarketInstance, Network, Node, ProsumerGroup
from .validation import ensure_valid

logger = Logger.get_logger(__name__, package=True)


@dataclass(frozen=True, kw_only=True)
class CalibrationSpec:
    """Survey-level inputs of a calibrated instance, one income tier per node."""

    baseline_demand_low: float
    """Per-household demand of the lowest tier, MWh/household/day."""
    group_scalings: tuple[float, ...]
    """Demand multiplier of each node's tier relative to the lowest tier."""
    households_per_group: tuple[float, ...]
    """Total households at each node."""
    expenditure_share: float
    """Share of income spent on electricity at the reference price."""
    reference_retail_price: float
    """$/MWh at which the baseline demand is observed."""
    demand_price_elasticity_at_reference: float
    """Point elasticity of demand at the reference point, negative."""
    solar_penetration: float
    """Share of the designated node's households owning DER."""
    solar_capacity_per_household: float
    """kW of DER per prosumer household."""
    prosumer_node: int = 0
    solar_full_load_hours: float = 1.0
    """Daily equivalent full-load hours of the DER."""
    backup_capacity: float = 0.0
    backup_cost_linear: float = 0.0
    backup_cost_quadratic: float = 0.0
    sunk_cost: float = 0.0
    """$/household/day of DER investment."""
    node_names: tuple[str, ...] = ()
    units: tuple[GenUnit, ...] = ()
    network: Network = field(default_factory=Network)
    fixed_cost_target: float = 0.0
    equity_weight: float | None = None
    equity_measure: EquityMeasure = EquityMeasure.ALL_GROUPS


def calibrate(spec: CalibrationSpec) -> MarketInstance:
    """
    Produce a validated instance from ``spec``.

    Raises:
        CalibrationError: If the spec is inconsistent; a nonnegative elasticity leaves no demand anchor.
        ValidationError: If the resulting instance violates an invariant.
    """
    _check_spec(spec)
    elasticity = spec.demand_price_elasticity_at_reference
    price = spec.reference_retail_price
    vertical_intercept = price * (1.0 - elasticity) / (-elasticity)

    nodes: list[Node] = []
    consumers: list[ConsumerGroup] = []
    prosumers: list[ProsumerGroup] = []
    for i, (scaling, households) in enumerate(zip(spec.group_scalings, spec.households_per_group, strict=True)):
        per_household = spec.baseline_demand_low * scaling
        baseline = households * per_household
        horizontal_intercept = baseline * (1.0 - elasticity)

        share = spec.solar_penetration if i == spec.prosumer_node else 0.0
        n_pro = households * share
        n_con = households - n_pro
        nodes.append(
            Node(
                id=i,
                demand_vertical_intercept=vertical_intercept,
                demand_horizontal_intercept=horizontal_intercept,
                prosumer_fraction=share,
                name=spec.node_names[i] if spec.node_names else None,
            )
        )
        if share < 1.0:
            consumers.append(
                ConsumerGroup(node=i, households=n_con, income=price * per_household / spec.expenditure_share)
            )
        if share > 0.0:
            prosumers.append(
                ProsumerGroup(
                    node=i,
                    households=n_pro,
                    income=(price * per_household + spec.sunk_cost) / spec.expenditure_share,
                    renewable_output=n_pro * spec.solar_capacity_per_household * spec.solar_full_load_hours / 1000.0,
                    backup_capacity=spec.backup_capacity,
                    backup_cost_linear=spec.backup_cost_linear,
                    backup_cost_quadratic=spec.backup_cost_quadratic,
                    sunk_cost=spec.sunk_cost,
                )
            )

    instance = MarketInstance(
        nodes=tuple(nodes),
        consumers=tuple(consumers),
        prosumers=tuple(prosumers),
        units=spec.units,
        network=spec.network,
        fixed_cost_target=spec.fixed_cost_target,
        equity_weight=spec.equity_weight,
        equity_measure=spec.equity_measure,
    )
    logger.info(f"Calibrated {len(nodes)}-node instance with P0 = {vertical_intercept:.6g} $/MWh")
    return ensure_valid(instance)


def _check_spec(spec: CalibrationSpec) -> None:
    problems: list[str] = []
    positive = {
        "baseline_demand_low": spec.baseline_demand_low,
        "reference_retail_price": spec.reference_retail_price,
        "solar_capacity_per_household": spec.solar_capacity_per_household,
        "solar_full_load_hours": spec.solar_full_load_hours,
    }
    problems.extend(f"{name} must be > 0" for name, value in positive.items() if not value > 0)
    if not 0.0 < spec.expenditure_share < 1.0:
        problems.append("expenditure_share must lie in (0, 1)")
    if not spec.demand_price_elasticity_at_reference < 0:
        problems.append("demand_price_elasticity_at_reference must be < 0")
    if not 0.0 < spec.solar_penetration <= 1.0:
        problems.append("solar_penetration must lie in (0, 1]")
    if len(spec.group_scalings) != len(spec.households_per_group):
        problems.append("group_scalings and households_per_group must have the same length")
    if any(not value > 0 for value in (*spec.group_scalings, *spec.households_per_group)):
        problems.append("group_scalings and households_per_group must be > 0")
    if spec.node_names and len(spec.node_names) != len(spec.households_per_group):
        problems.append("node_names must name every node")
    if not 0 <= spec.prosumer_node < len(spec.households_per_group):
        problems.append(f"prosumer_node {spec.prosumer_node} does not exist")
    if min(spec.backup_capacity, spec.backup_cost_linear, spec.backup_cost_quadratic, spec.sunk_cost) < 0:
        problems.append("backup and sunk cost parameters must be >= 0")
    if problems:
        raise CalibrationError(message=f"Invalid calibration: {'; '.join(problems)}", details={"problems": problems})
