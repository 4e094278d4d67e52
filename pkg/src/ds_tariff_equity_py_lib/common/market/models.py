"""
**File:** ``models.py``
**Region:** ``ds_tariff_equity_py_lib/common/market``

Description
-----------
Immutable domain types describing a static market instance: nodes with linear
retail demand, consumer and prosumer household groups, generating units and
the PTDF network.

All energies are MWh/day, prices $/MWh, incomes and charges $/household/day.
Demand quantities are group aggregates; incomes, fixed charges and sunk costs
are per household.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.market.models import (
        ConsumerGroup, GenUnit, MarketInstance, Network, Node,
    )

    instance = MarketInstance(
        nodes=(Node(id=0, demand_vertical_intercept=100.0, demand_horizontal_intercept=1000.0),),
        consumers=(ConsumerGroup(node=0, households=1000.0, income=100.0),),
        units=(GenUnit(node=0, id="G1", cost_linear=10.0, cost_quadratic=0.05, capacity=1000.0),),
        network=Network(ptdf=(), limits=()),
        fixed_cost_target=0.0,
    )
"""

from collections.abc import Mapping
from dataclasses import dataclass, field, replace

import numpy as np

from .enums import EquityMeasure

DEFAULT_EQUITY_WEIGHT_FACTOR = 1e6


@dataclass(frozen=True, kw_only=True)
class Node:
    """A network node carrying the aggregate retail demand curve."""

    id: int
    """Node index i, equal to the node's position in the instance."""
    demand_vertical_intercept: float
    """P0_i, $/MWh."""
    demand_horizontal_intercept: float
    """Q0_i, MWh/day."""
    prosumer_fraction: float = 0.0
    """alpha_i, share of the aggregate demand held by prosumers."""
    name: str | None = None
    """Optional label used in table columns."""

    @property
    def label(self) -> str:
        return self.name if self.name else str(self.id)

    @property
    def has_consumers(self) -> bool:
        return self.prosumer_fraction < 1.0

    @property
    def has_prosumers(self) -> bool:
        return self.prosumer_fraction > 0.0

    @property
    def consumer_slope(self) -> float:
        """Slope of the consumer inverse demand, P0 / ((1 - alpha) Q0)."""
        return self.demand_vertical_intercept / (
            (1.0 - self.prosumer_fraction) * self.demand_horizontal_intercept
        )

    @property
    def prosumer_slope(self) -> float:
        """Slope of the prosumer inverse demand, P0 / (alpha Q0)."""
        return self.demand_vertical_intercept / (self.prosumer_fraction * self.demand_horizontal_intercept)


@dataclass(frozen=True, kw_only=True)
class ConsumerGroup:
    """Households at a node without own generation."""

    node: int
    households: float
    """n_i^con."""
    income: float
    """I_i^con, $/household/day."""

    @property
    def populated(self) -> bool:
        return self.households > 0.0


@dataclass(frozen=True, kw_only=True)
class ProsumerGroup:
    """Households at a node with rooftop renewables and a backup generator."""

    node: int
    households: float
    """n_i^pro."""
    income: float
    """I_i^pro, $/household/day."""
    renewable_output: float = 0.0
    """R_i, MWh/day."""
    backup_capacity: float = 0.0
    """G_i, MWh/day."""
    backup_cost_linear: float = 0.0
    """c1 of C^g(g) = c1 g + c2 g^2 / 2, $/MWh."""
    backup_cost_quadratic: float = 0.0
    """c2 of C^g, $/MWh^2."""
    sunk_cost: float = 0.0
    """SC_i, $/household/day."""

    @property
    def populated(self) -> bool:
        return self.households > 0.0


@dataclass(frozen=True, kw_only=True)
class GenUnit:
    """A wholesale generating unit h at node i."""

    node: int
    id: str
    cost_linear: float
    """a_ih, $/MWh."""
    cost_quadratic: float
    """A_ih, $/MWh^2."""
    capacity: float
    """G_ih, MWh/day."""

    @property
    def key(self) -> str:
        return f"{self.node}/{self.id}"


@dataclass(frozen=True, kw_only=True)
class Network:
    """Linearised DC network: PTDF rows per line and thermal limits."""

    ptdf: tuple[tuple[float, ...], ...] = ()
    """K rows by N columns."""
    limits: tuple[float, ...] = ()
    """T_k, MWh/day."""

    @property
    def lines(self) -> int:
        return len(self.limits)

    def matrix(self, n_nodes: int) -> np.ndarray:
        """PTDF as a ``(K, N)`` array; an empty network yields shape ``(0, N)``."""
        if not self.ptdf:
            return np.zeros((0, n_nodes))
        return np.asarray(self.ptdf, dtype=float)


@dataclass(frozen=True, kw_only=True)
class MarketInstance:
    """Full static description of the market used by every other module."""

    nodes: tuple[Node, ...]
    consumers: tuple[ConsumerGroup, ...] = ()
    prosumers: tuple[ProsumerGroup, ...] = ()
    units: tuple[GenUnit, ...] = ()
    network: Network = field(default_factory=Network)
    fixed_cost_target: float = 0.0
    """Residual cost to recover, $/day."""
    equity_weight: float | None = None
    """M; ``None`` means ``1e6`` times the fixed cost target."""
    equity_measure: EquityMeasure = EquityMeasure.ALL_GROUPS
    tau_buy_max: float | None = None
    """Upper bound of the buy charge; ``None`` means the largest P0."""
    tau_sell_min: float | None = None
    """Lower bound of the sell charge; ``None`` means minus the largest P0."""

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def effective_equity_weight(self) -> float:
        if self.equity_weight is not None:
            return self.equity_weight
        return DEFAULT_EQUITY_WEIGHT_FACTOR * self.fixed_cost_target

    def consumer_at(self, node: int) -> ConsumerGroup | None:
        return next((group for group in self.consumers if group.node == node), None)

    def prosumer_at(self, node: int) -> ProsumerGroup | None:
        return next((group for group in self.prosumers if group.node == node), None)

    def units_at(self, node: int) -> tuple[GenUnit, ...]:
        return tuple(unit for unit in self.units if unit.node == node)

    def prosumer_nodes(self) -> tuple[int, ...]:
        """Nodes that carry prosumer variables in the welfare program."""
        return tuple(node.id for node in self.nodes if node.has_prosumers)

    def consumer_nodes(self) -> tuple[int, ...]:
        """Nodes that carry consumer variables in the welfare program."""
        return tuple(node.id for node in self.nodes if node.has_consumers)

    def with_overrides(
        self,
        *,
        renewable_output: Mapping[int, float] | None = None,
        backup_capacity: Mapping[int, float] | None = None,
        unit_capacity: Mapping[str, float] | None = None,
    ) -> "MarketInstance":
        """
        Return a copy with selected random quantities replaced.

        Args:
            renewable_output: R_i by node index.
            backup_capacity: G_i by node index.
            unit_capacity: G_ih by unit id.

        Returns:
            A new instance; the receiver is unchanged.
        """
        renewable_output = renewable_output or {}
        backup_capacity = backup_capacity or {}
        unit_capacity = unit_capacity or {}
        prosumers = tuple(
            replace(
                group,
                renewable_output=float(renewable_output.get(group.node, group.renewable_output)),
                backup_capacity=float(backup_capacity.get(group.node, group.backup_capacity)),
            )
            for group in self.prosumers
        )
        units = tuple(replace(unit, capacity=float(unit_capacity.get(unit.id, unit.capacity))) for unit in self.units)
        return replace(self, prosumers=prosumers, units=units)
