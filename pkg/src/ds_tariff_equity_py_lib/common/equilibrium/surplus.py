"""
**File:** ``surplus.py``
**Region:** ``ds_tariff_equity_py_lib/common/equilibrium``

Description
-----------
Split the welfare of an equilibrium into participant surpluses.

Consumer and prosumer surpluses are net of wholesale payments and volumetric
charges, producer surplus is revenue at the LMP minus production cost, and
the ISO collects ``-sum(p * y)`` as congestion rent. Together they add up to
the welfare objective; adding back the volumetric revenue gives total
surplus.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.equilibrium.surplus import surplus_decomposition

    report = surplus_decomposition(instance, sol.tau, sol)
    print(report.consumer_total, report.identity_residual)
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..market.demand import backup_cost, generation_cost, gross_benefit
from ..market.models import MarketInstance
from .charges import VolumetricCharges
from .solution import EquilibriumSolution


@dataclass(kw_only=True)
class SurplusReport:
    """Participant surpluses, $/day."""

    consumer: np.ndarray
    """Consumer surplus per node."""
    prosumer: np.ndarray
    """Prosumer surplus per node, before fixed charges."""
    producer: np.ndarray
    """Producer surplus per unit."""
    iso_revenue: float
    volumetric_revenue: float
    objective: float
    """Welfare value the decomposition is checked against."""

    @property
    def consumer_total(self) -> float:
        return float(self.consumer.sum())

    @property
    def prosumer_total(self) -> float:
        return float(self.prosumer.sum())

    @property
    def producer_total(self) -> float:
        return float(self.producer.sum())

    @property
    def wholesale_surplus(self) -> float:
        return self.consumer_total + self.producer_total + self.iso_revenue

    @property
    def total_surplus(self) -> float:
        """Welfare including the volumetric revenue collected by the utility."""
        return self.objective + self.volumetric_revenue

    @property
    def identity_residual(self) -> float:
        parts = self.consumer_total + self.prosumer_total + self.producer_total + self.iso_revenue
        return abs(parts - self.objective)

    def summary(self) -> dict[str, float]:
        return {
            "consumer_surplus": self.consumer_total,
            "prosumer_surplus": self.prosumer_total,
            "producer_surplus": self.producer_total,
            "iso_revenue": self.iso_revenue,
            "volumetric_revenue": self.volumetric_revenue,
            "wholesale_surplus": self.wholesale_surplus,
            "total_surplus": self.total_surplus,
            "objective": self.objective,
            "identity_residual": self.identity_residual,
        }

    def to_frame(self, instance: MarketInstance) -> pd.DataFrame:
        """Per-node table of consumer, prosumer and producer surplus."""
        producer = np.zeros(instance.n_nodes)
        np.add.at(producer, np.asarray([unit.node for unit in instance.units], dtype=int), self.producer)
        return pd.DataFrame(
            {"consumer": self.consumer, "prosumer": self.prosumer, "producer": producer},
            index=pd.Index([node.label for node in instance.nodes], name="node"),
        )


def surplus_decomposition(
    instance: MarketInstance, tau: VolumetricCharges, sol: EquilibriumSolution
) -> SurplusReport:
    """
    Decompose the welfare of ``sol`` at charges ``tau``.

    Args:
        instance: The market the solution belongs to.
        tau: Volumetric charges the solution was computed at.
        sol: Equilibrium solution; KKT residuals are assumed small.

    Returns:
        The surplus report.
    """
    n = instance.n_nodes
    consumer = np.zeros(n)
    prosumer = np.zeros(n)
    for node in instance.nodes:
        i = node.id
        if node.has_consumers:
            d = max(float(sol.d[i]), 0.0)
            consumer[i] = gross_benefit(node.demand_vertical_intercept, node.consumer_slope, d) - (
                sol.p[i] + tau.tau_buy
            ) * d
        group = instance.prosumer_at(i)
        if node.has_prosumers and group is not None:
            consumption = max(float(sol.l[i]), 0.0)
            prosumer[i] = (
                gross_benefit(node.demand_vertical_intercept, node.prosumer_slope, consumption)
                + (sol.p[i] + tau.tau_sell) * sol.z_sell[i]
                - (sol.p[i] + tau.tau_buy) * sol.z_buy[i]
                - backup_cost(group, max(float(sol.g_backup[i]), 0.0))
            )
    producer = np.array(
        [
            sol.p[unit.node] * sol.g_units[h] - generation_cost(unit, max(float(sol.g_units[h]), 0.0))
            for h, unit in enumerate(instance.units)
        ],
        dtype=float,
    )
    volumetric = tau.tau_buy * float(np.sum(sol.d) + np.sum(sol.z_buy)) - tau.tau_sell * float(np.sum(sol.z_sell))
    return SurplusReport(
        consumer=consumer,
        prosumer=prosumer,
        producer=producer,
        iso_revenue=-float(sol.p @ sol.y),
        volumetric_revenue=volumetric,
        objective=sol.objective,
    )
