"""
**File:** ``models.py``
**Region:** ``ds_tariff_equity_py_lib/common/tariff``

Description
-----------
Upper-level types: fixed charges per household group, incidence and revenue
reports, the volumetric-fraction policy, search settings and the outcome of a
tariff design.

Household groups are keyed by ``(GroupKind, node)`` and always enumerated
consumers first, then prosumers, each by node index.
"""

from dataclasses import dataclass, field

import numpy as np
from ds_common_serde_py_lib import Serializable

from ..equilibrium.charges import VolumetricCharges
from ..equilibrium.solution import EquilibriumSolution
from ..equilibrium.surplus import SurplusReport
from ..errors import PreconditionError
from ..market.enums import EquityMeasure, GroupKind
from ..market.models import MarketInstance

GroupKey = tuple[GroupKind, int]


def populated_groups(instance: MarketInstance) -> list[GroupKey]:
    """Keys of every group with households, consumers first."""
    keys: list[GroupKey] = [(GroupKind.CONSUMER, group.node) for group in instance.consumers if group.populated]
    keys.extend((GroupKind.PROSUMER, group.node) for group in instance.prosumers if group.populated)
    return sorted(keys, key=lambda key: (key[0] != GroupKind.CONSUMER, key[1]))


def group_label(instance: MarketInstance, key: GroupKey) -> str:
    """Column label such as ``con_A`` or ``pro_0``."""
    kind, node = key
    return f"{kind.value}_{instance.nodes[node].label}"


@dataclass(frozen=True, kw_only=True)
class FixedCharges:
    """Per-household fixed charges, $/household/day; absent keys mean no populated group."""

    phi_con: dict[int, float] = field(default_factory=dict)
    phi_pro: dict[int, float] = field(default_factory=dict)

    def get(self, key: GroupKey) -> float | None:
        kind, node = key
        return (self.phi_con if kind == GroupKind.CONSUMER else self.phi_pro).get(node)

    def consumer_revenue(self, instance: MarketInstance) -> float:
        return sum((group.households * self.phi_con.get(group.node, 0.0) for group in instance.consumers), 0.0)

    def prosumer_revenue(self, instance: MarketInstance) -> float:
        return sum((group.households * self.phi_pro.get(group.node, 0.0) for group in instance.prosumers), 0.0)

    def revenue(self, instance: MarketInstance) -> float:
        """``sum(n * phi)`` over all charged groups."""
        return self.consumer_revenue(instance) + self.prosumer_revenue(instance)

    @classmethod
    def from_vector(cls, keys: list[GroupKey], values: np.ndarray) -> "FixedCharges":
        pairs = list(zip(keys, values, strict=True))
        return cls(
            phi_con={node: float(value) for (kind, node), value in pairs if kind == GroupKind.CONSUMER},
            phi_pro={node: float(value) for (kind, node), value in pairs if kind == GroupKind.PROSUMER},
        )


@dataclass(kw_only=True)
class IncidenceReport:
    """Energy expenditure incidence per populated group and the equity gap."""

    inc_con: dict[int, float] = field(default_factory=dict)
    inc_pro: dict[int, float] = field(default_factory=dict)
    gap_B: float = 0.0  # noqa: N815
    measure: EquityMeasure = EquityMeasure.ALL_GROUPS

    def get(self, key: GroupKey) -> float | None:
        kind, node = key
        return (self.inc_con if kind == GroupKind.CONSUMER else self.inc_pro).get(node)

    def values(self) -> list[float]:
        return [*self.inc_con.values(), *self.inc_pro.values()]


@dataclass(kw_only=True)
class RevenueReport(Serializable):
    """Utility revenue against the fixed cost target, $/day."""

    volumetric_revenue: float
    fixed_revenue: float
    target: float
    total: float = 0.0
    residual: float = 0.0
    """``total - target``."""

    def __post_init__(self) -> None:
        self.total = self.volumetric_revenue + self.fixed_revenue
        self.residual = self.total - self.target

    def adequate(self, relative_tolerance: float = 1e-6) -> bool:
        return abs(self.residual) <= relative_tolerance * max(self.target, 1.0)


@dataclass(kw_only=True)
class FractionPolicy(Serializable):
    """Share of the fixed cost target recovered through volumetric charges."""

    fraction: float = 0.0
    equity_weight: float | None = None
    """M; ``None`` uses the instance's weight."""

    def __post_init__(self) -> None:
        if not 0.0 <= self.fraction <= 1.0:
            raise PreconditionError(
                message=f"fraction must lie in [0, 1], got {self.fraction}", details={"fraction": self.fraction}
            )
        if self.equity_weight is not None and self.equity_weight < 0:
            raise PreconditionError(
                message="equity_weight must be >= 0", details={"equity_weight": self.equity_weight}
            )

    def weight(self, instance: MarketInstance) -> float:
        return instance.effective_equity_weight if self.equity_weight is None else self.equity_weight


@dataclass(kw_only=True)
class TariffSearchSettings(Serializable):
    """Resolution of the nested search used by constrained tariffs."""

    outer_grid_points: int = 21
    """Coarse grid over ``tau_sell``; zero is always added."""
    revenue_scan_points: int = 9
    """Points scanned over ``tau_buy`` before the revenue root is bracketed."""
    root_xtol: float = 1e-10
    refine_maxiter: int = 40
    refine_xatol: float = 1e-6
    max_workers: int | None = None
    """Threads used for grid candidates and sweep points; ``None`` runs serially."""

    def __post_init__(self) -> None:
        if self.outer_grid_points < 2:
            raise PreconditionError(message="outer_grid_points must be >= 2")
        if self.revenue_scan_points < 2:
            raise PreconditionError(message="revenue_scan_points must be >= 2")
        if not (self.root_xtol > 0 and self.refine_xatol > 0):
            raise PreconditionError(message="root_xtol and refine_xatol must be > 0")
        if self.refine_maxiter < 0:
            raise PreconditionError(message="refine_maxiter must be >= 0")


@dataclass(kw_only=True)
class TariffOutcome:
    """A complete retail tariff and the market it induces."""

    tau: VolumetricCharges
    phi: FixedCharges
    solution: EquilibriumSolution
    incidence: IncidenceReport
    revenue: RevenueReport
    surplus: SurplusReport
    equity_weight: float
    fraction: float = 0.0

    @property
    def welfare(self) -> float:
        """Pi, the welfare value at the chosen charges."""
        return self.solution.objective

    @property
    def objective(self) -> float:
        """``Pi - M * B``."""
        return self.welfare - self.equity_weight * self.incidence.gap_B
