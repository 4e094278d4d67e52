"""
**File:** ``__init__.py``
**Region:** ``ds_tariff_equity_py_lib/common/tariff``

Description
-----------
Upper-level retail tariff logic: incidence, equity gap, revenue adequacy,
fixed-charge allocation, optimal and constrained tariffs and fraction sweeps.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.tariff import optimal_tariff

    outcome = optimal_tariff(instance)
    assert outcome.tau.is_zero
"""

from .allocation import allocate_budget, allocate_fixed_charges, gap_matrix, nodal_pairs
from .design import constrained_tariff, evaluate_tariff, optimal_tariff
from .incidence import GroupSpend, equity_gap_B, group_spends, incidence, revenue, volumetric_revenue
from .models import (
    FixedCharges,
    FractionPolicy,
    GroupKey,
    IncidenceReport,
    RevenueReport,
    TariffOutcome,
    TariffSearchSettings,
    group_label,
    populated_groups,
)
from .sweep import outcome_row, sweep_columns, sweep_fraction

__all__ = [
    "FixedCharges",
    "FractionPolicy",
    "GroupKey",
    "GroupSpend",
    "IncidenceReport",
    "RevenueReport",
    "TariffOutcome",
    "TariffSearchSettings",
    "allocate_budget",
    "allocate_fixed_charges",
    "constrained_tariff",
    "equity_gap_B",
    "evaluate_tariff",
    "gap_matrix",
    "group_label",
    "group_spends",
    "incidence",
    "nodal_pairs",
    "optimal_tariff",
    "outcome_row",
    "populated_groups",
    "revenue",
    "sweep_columns",
    "sweep_fraction",
    "volumetric_revenue",
]
