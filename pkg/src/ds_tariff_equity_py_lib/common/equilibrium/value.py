"""
**File:** ``value.py``
**Region:** ``ds_tariff_equity_py_lib/common/equilibrium``

Description
-----------
Welfare value ``V(tau)`` over grids of volumetric charges and the check that
zero charges maximise it.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.equilibrium.value import laissez_faire_check

    report = laissez_faire_check(instance)
    assert report.passed
"""

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from ds_common_logger_py_lib import Logger
from ds_common_serde_py_lib import Serializable

from ..errors import PreconditionError
from ..market.models import MarketInstance
from .charges import VolumetricCharges, tariff_box, tau_grid
from .settings import SolverSettings
from .solution import solve_equilibrium

logger = Logger.get_logger(__name__, package=True)

VALUE_COLUMNS = ("tau_buy", "tau_sell", "V")


def select_best(values: Sequence[float] | np.ndarray, origin: int, tolerance: float = 1e-6) -> int:
    """
    Index of the best value, ignoring differences below ``tolerance``.

    The origin is returned whenever it lies within ``tolerance * (1 + |V(0, 0)|)``
    of the maximum; otherwise the first index within ``tolerance * (1 + |max|)``
    of the maximum is returned.

    Example:
        >>> select_best([1.0, 1.0 + 1e-12, 0.5], origin=0)
        0
        >>> select_best([1.0, 3.0, 3.0], origin=0)
        1
    """
    array = np.asarray(values, dtype=float)
    top = float(array.max())
    v0 = float(array[origin])
    if top <= v0 + tolerance * (1.0 + abs(v0)):
        return origin
    return int(np.flatnonzero(array >= top - tolerance * (1.0 + abs(top)))[0])


def value_function_grid(
    instance: MarketInstance,
    grid: Sequence[VolumetricCharges],
    settings: SolverSettings | None = None,
    max_workers: int | None = None,
) -> pd.DataFrame:
    """
    Evaluate ``V`` at every point of ``grid``.

    Rows keep the order of ``grid``; ``max_workers`` above one solves the
    points on a thread pool.
    """

    def value(tau: VolumetricCharges) -> float:
        return solve_equilibrium(instance, tau, settings).objective

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            values = list(pool.map(value, grid))
    else:
        values = [value(tau) for tau in grid]
    return pd.DataFrame(
        {"tau_buy": [tau.tau_buy for tau in grid], "tau_sell": [tau.tau_sell for tau in grid], "V": values},
        columns=list(VALUE_COLUMNS),
    )


@dataclass(kw_only=True)
class LaissezFaireReport(Serializable):
    """Outcome of maximising ``V`` over a grid that contains the origin."""

    value_at_origin: float
    best_tau_buy: float
    best_tau_sell: float
    best_value: float
    margin: float
    """``V(0, 0)`` minus the best value elsewhere on the grid."""
    extreme_point_values: list[float] = field(default_factory=list)
    """``V`` at the four vertices of the tariff box, origin first."""
    grid_points: int = 0
    passed: bool = False


def laissez_faire_check(
    instance: MarketInstance,
    grid: Sequence[VolumetricCharges] | None = None,
    settings: SolverSettings | None = None,
    tolerance: float = 1e-6,
    max_workers: int | None = None,
) -> LaissezFaireReport:
    """
    Check that zero volumetric charges maximise welfare on ``grid``.

    The check passes when no grid point or box vertex exceeds ``V(0, 0)`` by
    more than ``tolerance * (1 + |V(0, 0)|)``. The reported best point is the
    origin whenever it is within that tolerance of the maximum, otherwise the
    first grid point within tolerance of it.

    Raises:
        PreconditionError: If ``grid`` does not contain the origin.
    """
    box = tariff_box(instance)
    points = list(grid) if grid is not None else tau_grid(box)
    if not any(tau.is_zero for tau in points):
        raise PreconditionError(message="Value-function grid must contain tau = (0, 0)")
    table = value_function_grid(instance, points, settings, max_workers)
    origin = next(index for index, tau in enumerate(points) if tau.is_zero)
    v0 = float(table["V"].iloc[origin])
    best = select_best(table["V"].to_numpy(dtype=float), origin, tolerance)
    vertices = [solve_equilibrium(instance, tau, settings).objective for tau in box.extreme_points()]
    others = table["V"].drop(index=origin)
    best_other = max([float(others.max()) if len(others) else -float("inf"), *vertices[1:]])
    slack = tolerance * (1.0 + abs(v0))
    report = LaissezFaireReport(
        value_at_origin=v0,
        best_tau_buy=float(table["tau_buy"].iloc[best]),
        best_tau_sell=float(table["tau_sell"].iloc[best]),
        best_value=float(table["V"].iloc[best]),
        margin=v0 - best_other,
        extreme_point_values=vertices,
        grid_points=len(points),
        passed=best_other <= v0 + slack,
    )
    message = f"Laissez-faire check over {len(points)} points: V(0,0)={v0:.6f}, margin={report.margin:.3e}"
    if report.passed:
        logger.info(f"{message}, PASS")
    else:
        logger.warning(f"{message}, FLAGGED")
    return report
