"""
**File:** ``closed_form.py``
**Region:** ``ds_tariff_equity_py_lib/common/verification``

Description
-----------
Closed-form clearing of a consumer-only node served by one unit.
"""

from typing import NamedTuple


class SingleNodeClearing(NamedTuple):
    d: float
    """Cleared demand, MWh."""
    p: float
    """Wholesale price, $/MWh."""
    g: float
    """Unit output, MWh."""
    rho: float
    """Capacity rent, $/MWh."""


def closed_form_single_node(
    P0: float,  # noqa: N803
    Q0: float,  # noqa: N803
    a: float,
    A: float,  # noqa: N803
    G: float,  # noqa: N803
    tau_b: float = 0.0,
) -> SingleNodeClearing:
    """
    Clear ``P0 - (P0/Q0) d - tau_b = a + A d`` subject to ``0 <= d <= G``.

    Without trade the price is reported at the unit's marginal cost ``a``.

    Example:
        >>> closed_form_single_node(100.0, 1000.0, 10.0, 0.05, 1000.0)
        SingleNodeClearing(d=600.0, p=40.0, g=600.0, rho=0.0)
    """
    slope = P0 / Q0
    if P0 <= a + tau_b:
        return SingleNodeClearing(d=0.0, p=a, g=0.0, rho=0.0)
    d = (P0 - a - tau_b) / (slope + A)
    if d <= G:
        return SingleNodeClearing(d=d, p=a + A * d, g=d, rho=0.0)
    p = P0 - tau_b - slope * G
    return SingleNodeClearing(d=G, p=p, g=G, rho=p - (a + A * G))
