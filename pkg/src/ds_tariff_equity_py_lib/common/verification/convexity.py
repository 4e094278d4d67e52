"""
**File:** ``convexity.py``
**Region:** ``ds_tariff_equity_py_lib/common/verification``

Description
-----------
Empirical convexity check on samples of a function of the volumetric charges.

For every collinear triple ``(a, m, b)`` with ``m = t a + (1 - t) b`` and
``0 < t < 1`` the violation is ``V(m) - t V(a) - (1 - t) V(b)``; a convex
function never has a positive violation.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.verification.convexity import convexity_probe

    report = convexity_probe([((0.0, 0.0), 1.0), ((1.0, 0.0), 0.0), ((2.0, 0.0), 1.0)])
    assert report.worst_violation <= 0
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from ds_common_serde_py_lib import Serializable

from ..equilibrium.charges import VolumetricCharges
from ..errors import PreconditionError

COLLINEAR_TOLERANCE = 1e-9

Sample = tuple[VolumetricCharges | tuple[float, float], float]


@dataclass(kw_only=True)
class ConvexityReport(Serializable):
    """Worst convexity violation among the collinear triples of a sample."""

    worst_violation: float
    triples_checked: int
    worst_middle: list[float] = field(default_factory=list)
    """``[tau_buy, tau_sell]`` of the middle point of the worst triple."""
    worst_ends: list[list[float]] = field(default_factory=list)

    def passes(self, tolerance: float) -> bool:
        return self.worst_violation <= tolerance


def _point(tau: VolumetricCharges | tuple[float, float]) -> tuple[float, float]:
    if isinstance(tau, VolumetricCharges):
        return tau.tau_buy, tau.tau_sell
    return float(tau[0]), float(tau[1])


def convexity_probe(samples: Sequence[Sample] | pd.DataFrame) -> ConvexityReport:
    """
    Report the worst convexity violation across all collinear sample triples.

    Args:
        samples: ``(tau, V)`` pairs, or a frame with ``tau_buy``, ``tau_sell`` and ``V`` columns.

    Raises:
        PreconditionError: If fewer than three samples or no collinear triple are given.
    """
    if isinstance(samples, pd.DataFrame):
        points = samples[["tau_buy", "tau_sell"]].to_numpy(dtype=float)
        values = samples["V"].to_numpy(dtype=float)
    else:
        points = np.array([_point(tau) for tau, _ in samples], dtype=float).reshape(-1, 2)
        values = np.array([value for _, value in samples], dtype=float)
    n = values.shape[0]
    if n < 3:
        raise PreconditionError(message=f"Convexity probe needs at least 3 samples, got {n}", details={"samples": n})

    scale = max(1.0, float(np.max(np.abs(points))))
    worst = -np.inf
    where: tuple[int, int, int] | None = None
    checked = 0
    for j in range(n):
        # ends a (rows) and b (columns) around middle j
        da = points[:, None, :] - points[j]
        span = points[None, :, :] - points[:, None, :]
        length2 = np.einsum("ijk,ijk->ij", span, span)
        cross = span[..., 0] * (points[j, 1] - points[:, None, 1]) - span[..., 1] * (points[j, 0] - points[:, None, 0])
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.einsum("ijk,ijk->ij", -da, span) / length2
        mask = (length2 > 0) & (np.abs(cross) <= COLLINEAR_TOLERANCE * scale * scale) & (s > 0) & (s < 1)
        mask[j, :] = False
        mask[:, j] = False
        if not mask.any():
            continue
        # mask is symmetric in (a, b); count each unordered triple once
        mask &= np.triu(np.ones((n, n), dtype=bool), k=1)
        violation = np.where(mask, values[j] - ((1 - s) * values[:, None] + s * values[None, :]), -np.inf)
        checked += int(mask.sum())
        flat = int(np.argmax(violation))
        if violation.flat[flat] > worst:
            worst = float(violation.flat[flat])
            where = (flat // n, j, flat % n)

    if where is None:
        raise PreconditionError(message="Convexity probe found no collinear triple among the samples")
    a, m, b = where
    return ConvexityReport(
        worst_violation=worst,
        triples_checked=checked,
        worst_middle=points[m].tolist(),
        worst_ends=[points[a].tolist(), points[b].tolist()],
    )
