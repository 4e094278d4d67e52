"""
**File:** ``charges.py``
**Region:** ``ds_tariff_equity_py_lib/common/equilibrium``

Description
-----------
Volumetric charges and the admissible box they live in.

The box is ``0 <= tau_buy <= tau_buy_max`` and
``tau_sell_min <= tau_sell <= tau_buy``; by default ``tau_buy_max`` is the
largest vertical demand intercept and ``tau_sell_min`` its negative.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.equilibrium.charges import VolumetricCharges, tariff_box

    box = tariff_box(instance)
    tau = VolumetricCharges(tau_buy=5.0, tau_sell=-4.0)
    tau.check(box)
"""

from dataclasses import dataclass

import numpy as np

from ..errors import TariffBoxError
from ..market.models import MarketInstance

BOX_TOLERANCE = 1e-12


@dataclass(frozen=True, kw_only=True)
class TariffBox:
    """Bounded polyhedron of admissible volumetric charges."""

    tau_buy_max: float
    tau_sell_min: float

    def extreme_points(self) -> tuple["VolumetricCharges", ...]:
        """The four vertices of the box, starting at the origin."""
        return (
            VolumetricCharges(tau_buy=0.0, tau_sell=0.0),
            VolumetricCharges(tau_buy=self.tau_buy_max, tau_sell=self.tau_buy_max),
            VolumetricCharges(tau_buy=self.tau_buy_max, tau_sell=self.tau_sell_min),
            VolumetricCharges(tau_buy=0.0, tau_sell=self.tau_sell_min),
        )

    def contains(self, tau: "VolumetricCharges") -> bool:
        tol = BOX_TOLERANCE * max(1.0, self.tau_buy_max)
        return (
            -tol <= tau.tau_buy <= self.tau_buy_max + tol
            and self.tau_sell_min - tol <= tau.tau_sell
            and tau.tau_sell <= tau.tau_buy
        )


@dataclass(frozen=True, kw_only=True)
class VolumetricCharges:
    """Retail adders on purchases (``tau_buy``) and sales (``tau_sell``), $/MWh."""

    tau_buy: float = 0.0
    tau_sell: float = 0.0
    box: TariffBox | None = None
    """Explicit box; ``None`` means the instance's box."""

    @property
    def is_zero(self) -> bool:
        return self.tau_buy == 0.0 and self.tau_sell == 0.0

    def check(self, box: TariffBox) -> "VolumetricCharges":
        """Return ``self`` or raise ``TariffBoxError`` when outside ``box``."""
        box = self.box or box
        if not box.contains(self):
            raise TariffBoxError(
                message=(
                    f"Volumetric charges (tau_buy={self.tau_buy}, tau_sell={self.tau_sell}) are outside the box "
                    f"0 <= tau_buy <= {box.tau_buy_max}, {box.tau_sell_min} <= tau_sell <= tau_buy"
                ),
                details={
                    "tau_buy": self.tau_buy,
                    "tau_sell": self.tau_sell,
                    "tau_buy_max": box.tau_buy_max,
                    "tau_sell_min": box.tau_sell_min,
                },
            )
        return self

    def __str__(self) -> str:
        return f"{self.tau_buy:g} ({self.tau_sell:g})"


def tariff_box(instance: MarketInstance) -> TariffBox:
    """Admissible box of ``instance``."""
    top = max(node.demand_vertical_intercept for node in instance.nodes)
    return TariffBox(
        tau_buy_max=top if instance.tau_buy_max is None else instance.tau_buy_max,
        tau_sell_min=-top if instance.tau_sell_min is None else instance.tau_sell_min,
    )


def tau_grid(box: TariffBox, n_buy: int = 11, n_sell: int = 11) -> list[VolumetricCharges]:
    """
    Rectangular grid over the box filtered to ``tau_sell <= tau_buy``.

    The origin is always part of the grid. Points are ordered by ``tau_buy``
    then ``tau_sell``, so the origin comes first among ties.
    """
    buys = np.union1d(np.linspace(0.0, box.tau_buy_max, max(n_buy, 1)), [0.0])
    sells = np.union1d(np.linspace(box.tau_sell_min, box.tau_buy_max, max(n_sell, 1)), [0.0])
    grid = [
        VolumetricCharges(tau_buy=float(buy), tau_sell=float(sell))
        for buy in buys
        for sell in sells
        if sell <= buy
    ]
    grid.sort(key=lambda tau: (not tau.is_zero, tau.tau_buy, tau.tau_sell))
    return grid
