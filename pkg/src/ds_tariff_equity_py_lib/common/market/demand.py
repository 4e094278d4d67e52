"""
**File:** ``demand.py``
**Region:** ``ds_tariff_equity_py_lib/common/market``

Description
-----------
Linear inverse demand curves, their integrals, and quadratic production costs.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.market.demand import gross_benefit

    gross_benefit(20.0, 1.0, 10.0)  # 150.0
"""

from ..errors import PreconditionError
from .models import GenUnit, Node, ProsumerGroup


def inverse_demand_consumer(node: Node, d: float) -> float:
    """
    Consumer retail price at aggregate consumption ``d``.

    The result may be negative beyond the horizontal intercept.

    Raises:
        PreconditionError: If the node has no consumer share or ``d < 0``.
    """
    if not node.has_consumers:
        raise PreconditionError(
            message=f"Node {node.id} has no consumer demand (prosumer_fraction = 1)",
            details={"node": node.id},
        )
    _require_nonnegative(d, "d")
    return node.demand_vertical_intercept - node.consumer_slope * d


def inverse_demand_prosumer(node: Node, l: float) -> float:  # noqa: E741
    """
    Prosumer retail price at aggregate prosumer consumption ``l``.

    Raises:
        PreconditionError: If the node has no prosumer share or ``l < 0``.
    """
    if not node.has_prosumers:
        raise PreconditionError(
            message=f"Node {node.id} has no prosumer demand (prosumer_fraction = 0)",
            details={"node": node.id},
        )
    _require_nonnegative(l, "l")
    return node.demand_vertical_intercept - node.prosumer_slope * l


def consumer_quantity(node: Node, price: float) -> float:
    """Consumer quantity demanded at ``price``, clamped at zero."""
    if not node.has_consumers:
        return 0.0
    return max(0.0, (node.demand_vertical_intercept - price) / node.consumer_slope)


def prosumer_quantity(node: Node, price: float) -> float:
    """Prosumer quantity demanded at ``price``, clamped at zero."""
    if not node.has_prosumers:
        return 0.0
    return max(0.0, (node.demand_vertical_intercept - price) / node.prosumer_slope)


def gross_benefit(intercept: float, slope: float, q: float) -> float:
    """
    Integral of ``intercept - slope * m`` over ``m`` in ``[0, q]``.

    Args:
        intercept: Vertical intercept P0.
        slope: Slope of the inverse demand.
        q: Consumed quantity.

    Returns:
        ``intercept * q - slope * q**2 / 2``.
    """
    _require_nonnegative(q, "q")
    return intercept * q - 0.5 * slope * q * q


def generation_cost(unit: GenUnit, g: float) -> float:
    """Production cost ``a g + A g^2 / 2`` of a wholesale unit."""
    _require_nonnegative(g, "g")
    return unit.cost_linear * g + 0.5 * unit.cost_quadratic * g * g


def marginal_cost(unit: GenUnit, g: float) -> float:
    return unit.cost_linear + unit.cost_quadratic * g


def backup_cost(group: ProsumerGroup, g: float) -> float:
    """Aggregate backup generation cost of a prosumer group."""
    _require_nonnegative(g, "g")
    return group.backup_cost_linear * g + 0.5 * group.backup_cost_quadratic * g * g


def _require_nonnegative(value: float, name: str) -> None:
    # small negative values come from interior-point round-off
    if value < -1e-9:
        raise PreconditionError(message=f"{name} must be nonnegative, got {value}", details={name: value})
