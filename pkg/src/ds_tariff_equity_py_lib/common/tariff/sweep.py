"""
**File:** ``sweep.py``
**Region:** ``ds_tariff_equity_py_lib/common/tariff``

Description
-----------
Constrained tariffs over a grid of volumetric fractions, one table row per
fraction. Household surpluses are reported before fixed charges and, in the
``_net`` columns, after them. Failed points keep their row with ``NaN``
values and the error code in ``status``.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.tariff.sweep import sweep_fraction

    table = sweep_fraction(instance, [0.0, 0.1, 0.5])
    table.to_csv("sweep.csv", index=False, float_format="%.9g")
"""

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import Any

import numpy as np
import pandas as pd
from ds_common_logger_py_lib import Logger

from ..equilibrium.settings import SolverSettings
from ..errors import PreconditionError, TariffEquityException
from ..market.models import MarketInstance
from .design import constrained_tariff
from .models import FractionPolicy, TariffOutcome, TariffSearchSettings, group_label, populated_groups

logger = Logger.get_logger(__name__, package=True)

STATUS_OK = "ok"


def sweep_columns(instance: MarketInstance) -> list[str]:
    """Column order of the sweep table."""
    groups = [group_label(instance, key) for key in populated_groups(instance)]
    labels = [node.label for node in instance.nodes]
    return [
        "fraction",
        "tau_buy",
        "tau_sell",
        *(f"phi_{group}" for group in groups),
        *(f"lmp_{label}" for label in labels),
        *(f"demand_{label}" for label in labels),
        "prosumer_net_sale",
        "backup_generation",
        "surplus_consumer",
        "surplus_prosumer",
        "surplus_consumer_net",
        "surplus_prosumer_net",
        "surplus_producer",
        "iso_revenue",
        "wholesale_surplus",
        "total_surplus",
        *(f"incidence_{group}" for group in groups),
        "equity_gap_B",
        "status",
    ]


def outcome_row(instance: MarketInstance, outcome: TariffOutcome) -> dict[str, Any]:
    """One sweep-table row describing ``outcome``."""
    sol = outcome.solution
    surplus = outcome.surplus
    row: dict[str, Any] = {
        "fraction": outcome.fraction,
        "tau_buy": outcome.tau.tau_buy,
        "tau_sell": outcome.tau.tau_sell,
    }
    for key in populated_groups(instance):
        row[f"phi_{group_label(instance, key)}"] = outcome.phi.get(key)
    for node in instance.nodes:
        row[f"lmp_{node.label}"] = float(sol.p[node.id])
    for node in instance.nodes:
        row[f"demand_{node.label}"] = float(sol.d[node.id] + sol.l[node.id])
    row.update(
        {
            "prosumer_net_sale": float(np.sum(sol.net_sales)),
            "backup_generation": float(np.sum(sol.g_backup)),
            "surplus_consumer": surplus.consumer_total,
            "surplus_prosumer": surplus.prosumer_total,
            "surplus_consumer_net": surplus.consumer_total - outcome.phi.consumer_revenue(instance),
            "surplus_prosumer_net": surplus.prosumer_total - outcome.phi.prosumer_revenue(instance),
            "surplus_producer": surplus.producer_total,
            "iso_revenue": surplus.iso_revenue,
            "wholesale_surplus": surplus.wholesale_surplus,
            "total_surplus": surplus.total_surplus,
        }
    )
    for key in populated_groups(instance):
        row[f"incidence_{group_label(instance, key)}"] = outcome.incidence.get(key)
    row["equity_gap_B"] = outcome.incidence.gap_B
    row["status"] = STATUS_OK
    return row


def sweep_fraction(
    instance: MarketInstance,
    fraction_grid: Sequence[float],
    settings: TariffSearchSettings | None = None,
    solver: SolverSettings | None = None,
    equity_weight: float | None = None,
) -> pd.DataFrame:
    """
    Run ``constrained_tariff`` at every fraction of ``fraction_grid``.

    Raises:
        PreconditionError: If a fraction lies outside ``[0, 1]``.
    """
    fractions = [float(f) for f in fraction_grid]
    bad = [f for f in fractions if not 0.0 <= f <= 1.0]
    if bad:
        raise PreconditionError(message=f"Fractions must lie in [0, 1], got {bad}", details={"fractions": bad})
    settings = settings or TariffSearchSettings()
    columns = sweep_columns(instance)

    def run(fraction: float) -> dict[str, Any]:
        try:
            outcome = constrained_tariff(
                instance, FractionPolicy(fraction=fraction, equity_weight=equity_weight), settings, solver
            )
        except TariffEquityException as exc:
            logger.warning(f"Sweep point f={fraction:g} failed: {exc.message}")
            row: dict[str, Any] = dict.fromkeys(columns, np.nan)
            row.update({"fraction": fraction, "status": exc.code})
            return row
        logger.info(f"Sweep point f={fraction:g}: tau={outcome.tau}, B={outcome.incidence.gap_B:.3e}")
        return outcome_row(instance, outcome)

    if settings.max_workers and settings.max_workers > 1 and len(fractions) > 1:
        with ThreadPoolExecutor(max_workers=settings.max_workers) as pool:
            rows = list(pool.map(run, fractions))
    else:
        rows = [run(fraction) for fraction in fractions]
    return pd.DataFrame(rows, columns=columns)
