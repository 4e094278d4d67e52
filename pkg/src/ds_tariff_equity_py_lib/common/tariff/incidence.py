"""
**File:** ``incidence.py``
**Region:** ``ds_tariff_equity_py_lib/common/tariff``

Description
-----------
Energy expenditure incidence, the equity gap ``B`` and revenue adequacy.

A consumer household spends its share of ``(p + tau_buy) d`` plus its fixed
charge. A prosumer household spends its share of ``(p + tau_buy) z_buy`` and
of the backup cost, plus its fixed charge and sunk cost; sales income is not
netted out. Trades are taken in canonical (net) form.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.tariff.incidence import equity_gap_B

    equity_gap_B({0: 0.01}, {0: 0.03})  # 2e-4
"""

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from ..equilibrium.charges import VolumetricCharges
from ..equilibrium.solution import EquilibriumSolution
from ..errors import PreconditionError
from ..market.demand import backup_cost
from ..market.enums import EquityMeasure, GroupKind
from ..market.models import MarketInstance
from .models import FixedCharges, GroupKey, IncidenceReport, RevenueReport, populated_groups


@dataclass(frozen=True, kw_only=True)
class GroupSpend:
    """Per-household spending of one group before fixed charges."""

    key: GroupKey
    households: float
    income: float
    spend: float


def group_spends(instance: MarketInstance, tau: VolumetricCharges, sol: EquilibriumSolution) -> list[GroupSpend]:
    """Spending of every populated group, in ``populated_groups`` order."""
    _, z_buy = sol.canonical_trades()
    spends = []
    for key in populated_groups(instance):
        kind, node = key
        price = sol.p[node] + tau.tau_buy
        if kind == GroupKind.CONSUMER:
            group = instance.consumer_at(node)
            assert group is not None
            spend = price * sol.d[node] / group.households
            spends.append(GroupSpend(key=key, households=group.households, income=group.income, spend=spend))
        else:
            pro = instance.prosumer_at(node)
            assert pro is not None
            generation = backup_cost(pro, max(float(sol.g_backup[node]), 0.0))
            spend = (price * z_buy[node] + generation) / pro.households + pro.sunk_cost
            spends.append(GroupSpend(key=key, households=pro.households, income=pro.income, spend=spend))
    return spends


def equity_gap_B(  # noqa: N802
    inc_con: Mapping[int, float],
    inc_pro: Mapping[int, float],
    measure: EquityMeasure = EquityMeasure.ALL_GROUPS,
) -> float:
    """
    Aggregate incidence differences into one nonnegative number.

    ``ALL_GROUPS`` sums squared deviations from the mean over all groups;
    ``NODAL_PAIRS`` sums squared consumer-minus-prosumer differences at nodes
    holding both groups.
    """
    if measure == EquityMeasure.NODAL_PAIRS:
        return float(sum((inc_con[node] - inc_pro[node]) ** 2 for node in inc_con if node in inc_pro))
    values = np.array([*inc_con.values(), *inc_pro.values()], dtype=float)
    if values.size == 0:
        return 0.0
    return float(np.sum((values - values.mean()) ** 2))


def incidence(
    instance: MarketInstance, tau: VolumetricCharges, phi: FixedCharges, sol: EquilibriumSolution
) -> IncidenceReport:
    """
    Incidence of every populated group and the resulting equity gap.

    Raises:
        PreconditionError: If ``phi`` lacks a populated group.
    """
    inc_con: dict[int, float] = {}
    inc_pro: dict[int, float] = {}
    for item in group_spends(instance, tau, sol):
        charge = phi.get(item.key)
        kind, node = item.key
        if charge is None:
            raise PreconditionError(
                message=f"Fixed charge missing for populated group {kind.value} at node {node}",
                details={"group": kind.value, "node": node},
            )
        target = inc_con if kind == GroupKind.CONSUMER else inc_pro
        target[node] = (item.spend + charge) / item.income
    return IncidenceReport(
        inc_con=inc_con,
        inc_pro=inc_pro,
        gap_B=equity_gap_B(inc_con, inc_pro, instance.equity_measure),
        measure=instance.equity_measure,
    )


def volumetric_revenue(tau: VolumetricCharges, sol: EquilibriumSolution) -> float:
    """``tau_buy * (d + z_buy) - tau_sell * z_sell`` summed over nodes."""
    return tau.tau_buy * float(np.sum(sol.d) + np.sum(sol.z_buy)) - tau.tau_sell * float(np.sum(sol.z_sell))


def revenue(
    instance: MarketInstance, tau: VolumetricCharges, phi: FixedCharges, sol: EquilibriumSolution
) -> RevenueReport:
    return RevenueReport(
        volumetric_revenue=volumetric_revenue(tau, sol),
        fixed_revenue=phi.revenue(instance),
        target=instance.fixed_cost_target,
    )
