"""
**File:** ``enums.py``
**Region:** ``ds_tariff_equity_py_lib/common/market``

Description
-----------
Enumerations for market instances and their documents.
"""

from enum import StrEnum


class EquityMeasure(StrEnum):
    """How incidence differences are aggregated into the equity gap."""

    ALL_GROUPS = "all_groups"
    """Squared deviation from the mean over every populated group at every node."""
    NODAL_PAIRS = "nodal_pairs"
    """Squared consumer-minus-prosumer difference at each node holding both groups."""


class GroupKind(StrEnum):
    """Household group kinds."""

    CONSUMER = "con"
    """Households without generation."""
    PROSUMER = "pro"
    """Households with rooftop renewables and backup generation."""


class EnergyUnit(StrEnum):
    """Energy units accepted in documents, converted to MWh on load."""

    KWH = "kWh"
    """Kilowatt-hours."""
    MWH = "MWh"
    """Megawatt-hours (canonical)."""
    GWH = "GWh"
    """Gigawatt-hours."""

    @property
    def to_mwh(self) -> float:
        """Multiplier converting one unit of this energy into MWh."""
        return {EnergyUnit.KWH: 1e-3, EnergyUnit.MWH: 1.0, EnergyUnit.GWH: 1e3}[self]


class MoneyUnit(StrEnum):
    """Money units accepted in documents, converted to dollars on load."""

    DOLLAR = "$"
    """Dollars (canonical)."""
    KILO_DOLLAR = "k$"
    """Thousands of dollars."""

    @property
    def to_dollar(self) -> float:
        """Multiplier converting one unit of this money into dollars."""
        return {MoneyUnit.DOLLAR: 1.0, MoneyUnit.KILO_DOLLAR: 1e3}[self]
