"""
**File:** ``kkt.py``
**Region:** ``ds_tariff_equity_py_lib/common/equilibrium``

Description
-----------
Residuals of the consumer, prosumer and ISO optimality systems at a given
equilibrium solution.

Each nonnegative variable ``x`` with reduced cost ``r`` must satisfy
``0 <= x  _|_  r >= 0``. The report uses

- primal feasibility: bound, balance and line violations
- dual feasibility: ``max(0, -r)`` and negative multipliers
- stationarity: the natural residual ``|min(x, r)|`` (and ``|grad|`` for free flows)
- complementarity: ``|x * r|`` and multiplier times slack

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.equilibrium.kkt import kkt_residuals

    report = kkt_residuals(instance, sol.tau, sol)
    assert report.max_residual <= 1e-9
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd
from ds_common_serde_py_lib import Serializable

from ..market.models import MarketInstance
from .charges import VolumetricCharges
from .program import trade_cap
from .solution import EquilibriumSolution

MEASURES = ("primal_feasibility", "dual_feasibility", "stationarity", "complementarity")


@dataclass(kw_only=True)
class BlockResiduals(Serializable):
    """Largest residual of each kind within one optimality system."""

    primal_feasibility: float = 0.0
    dual_feasibility: float = 0.0
    stationarity: float = 0.0
    complementarity: float = 0.0

    @property
    def max(self) -> float:
        return max(self.primal_feasibility, self.dual_feasibility, self.stationarity, self.complementarity)


@dataclass(kw_only=True)
class KktReport(Serializable):
    """Residuals of the three participant systems."""

    consumer: BlockResiduals
    prosumer: BlockResiduals
    iso: BlockResiduals

    @property
    def max_residual(self) -> float:
        return max(self.consumer.max, self.prosumer.max, self.iso.max)

    def passes(self, tolerance: float) -> bool:
        return self.max_residual <= tolerance

    def to_frame(self) -> pd.DataFrame:
        """One row per block, one column per residual kind."""
        rows = {name: getattr(self, name) for name in ("consumer", "prosumer", "iso")}
        return pd.DataFrame(
            [[getattr(block, measure) for measure in MEASURES] for block in rows.values()],
            index=pd.Index(list(rows), name="block"),
            columns=list(MEASURES),
        )


def _worst(*values: np.ndarray | float) -> float:
    flat = [np.abs(np.atleast_1d(np.asarray(value, dtype=float))) for value in values]
    return float(max((np.max(v, initial=0.0) for v in flat), default=0.0))


def _negative_part(values: np.ndarray | float) -> np.ndarray:
    return np.maximum(0.0, -np.atleast_1d(np.asarray(values, dtype=float)))


def _natural(x: np.ndarray | float, reduced_cost: np.ndarray | float) -> np.ndarray:
    return np.minimum(np.atleast_1d(x), np.atleast_1d(reduced_cost))


def kkt_residuals(instance: MarketInstance, tau: VolumetricCharges, sol: EquilibriumSolution) -> KktReport:
    """
    Evaluate the optimality systems of every market participant at ``sol``.

    Args:
        instance: The market the solution belongs to.
        tau: Volumetric charges the solution was computed at.
        sol: Equilibrium solution with dense per-node arrays.

    Returns:
        Per-block residual maxima. Blocks without participants report zeros.
    """
    nodes = instance.nodes
    p = sol.p

    consumer_idx = np.asarray(instance.consumer_nodes(), dtype=int)
    consumer = BlockResiduals()
    if consumer_idx.size:
        intercept = np.array([nodes[i].demand_vertical_intercept for i in consumer_idx])
        slope = np.array([nodes[i].consumer_slope for i in consumer_idx])
        d = sol.d[consumer_idx]
        r_d = p[consumer_idx] + tau.tau_buy - (intercept - slope * d)
        consumer = BlockResiduals(
            primal_feasibility=_worst(_negative_part(d)),
            dual_feasibility=_worst(_negative_part(r_d)),
            stationarity=_worst(_natural(d, r_d)),
            complementarity=_worst(d * r_d),
        )

    prosumer_idx = np.asarray(instance.prosumer_nodes(), dtype=int)
    prosumer = BlockResiduals()
    if prosumer_idx.size:
        groups = [instance.prosumer_at(int(i)) for i in prosumer_idx]
        intercept = np.array([nodes[i].demand_vertical_intercept for i in prosumer_idx])
        slope = np.array([nodes[i].prosumer_slope for i in prosumer_idx])
        renewable = np.array([group.renewable_output for group in groups if group])
        capacity = np.array([group.backup_capacity for group in groups if group])
        c1 = np.array([group.backup_cost_linear for group in groups if group])
        c2 = np.array([group.backup_cost_quadratic for group in groups if group])
        caps = np.array([trade_cap(instance, int(i)) for i in prosumer_idx])
        l, zs, zb, g = (arr[prosumer_idx] for arr in (sol.l, sol.z_sell, sol.z_buy, sol.g_backup))
        delta, kappa, price = sol.delta[prosumer_idx], sol.kappa[prosumer_idx], p[prosumer_idx]
        r_l = delta - (intercept - slope * l)
        r_zs = delta - (price + tau.tau_sell)
        r_zb = price + tau.tau_buy - delta
        r_g = c1 + c2 * g + kappa - delta
        prosumer = BlockResiduals(
            primal_feasibility=_worst(
                l + zs - zb - g - renewable,
                _negative_part(np.concatenate([l, zs, zb, g])),
                np.maximum(0.0, g - capacity),
                np.maximum(0.0, zs - caps),
                np.maximum(0.0, zb - caps),
            ),
            dual_feasibility=_worst(_negative_part(np.concatenate([r_l, r_zs, r_zb, r_g, kappa]))),
            stationarity=_worst(_natural(l, r_l), _natural(zs, r_zs), _natural(zb, r_zb), _natural(g, r_g)),
            complementarity=_worst(l * r_l, zs * r_zs, zb * r_zb, g * r_g, kappa * (capacity - g)),
        )

    unit_nodes = np.array([unit.node for unit in instance.units], dtype=int)
    a = np.array([unit.cost_linear for unit in instance.units])
    big_a = np.array([unit.cost_quadratic for unit in instance.units])
    cap = np.array([unit.capacity for unit in instance.units])
    g_units, rho = sol.g_units, sol.rho
    r_units = a + big_a * g_units + rho - p[unit_nodes] if unit_nodes.size else np.zeros(0)

    injection = np.zeros(instance.n_nodes)
    np.add.at(injection, unit_nodes, g_units)
    nodal = sol.y - injection - sol.z_sell + sol.z_buy + sol.d

    ptdf = instance.network.matrix(instance.n_nodes)
    limits = np.asarray(instance.network.limits, dtype=float)
    flows = ptdf @ sol.y
    lam_p, lam_m = sol.lambda_plus, sol.lambda_minus
    y_grad = p + sol.theta + ptdf.T @ (lam_p - lam_m)
    iso = BlockResiduals(
        primal_feasibility=_worst(
            nodal,
            float(np.sum(sol.y)),
            _negative_part(g_units),
            np.maximum(0.0, g_units - cap),
            np.maximum(0.0, np.abs(flows) - limits),
        ),
        dual_feasibility=_worst(_negative_part(np.concatenate([r_units, rho, lam_p, lam_m]))),
        stationarity=_worst(_natural(g_units, r_units), y_grad),
        complementarity=_worst(
            g_units * r_units, rho * (cap - g_units), lam_p * (limits - flows), lam_m * (limits + flows)
        ),
    )
    return KktReport(consumer=consumer, prosumer=prosumer, iso=iso)
