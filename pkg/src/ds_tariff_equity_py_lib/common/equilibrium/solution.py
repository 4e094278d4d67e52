"""
**File:** ``solution.py``
**Region:** ``ds_tariff_equity_py_lib/common/equilibrium``

Description
-----------
Equilibrium solution type, the welfare-program solve and multiplier
extraction.

Per-node arrays are dense over nodes; entries of groups that are absent at a
node are ``0``. ``p`` holds the nodal-balance multipliers (LMPs), ``theta`` the
system-balance multiplier, ``delta`` the prosumer balances, ``kappa`` the
backup capacity multipliers, ``rho`` the unit capacity multipliers and
``lambda_plus`` / ``lambda_minus`` the two directions of every line limit.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.equilibrium import VolumetricCharges, solve_equilibrium

    sol = solve_equilibrium(instance, VolumetricCharges(tau_buy=15.0))
    print(sol.d, sol.p, sol.objective)
"""

from dataclasses import dataclass, field
from typing import overload

import numpy as np
from ds_common_logger_py_lib import Logger

from ..errors import SolverError, TariffEquityException
from ..market.models import MarketInstance
from .charges import VolumetricCharges
from .program import QuadraticProgram, assemble_welfare_program
from .settings import SolverSettings
from .solver import PrimalDualSolution, solve_qp

logger = Logger.get_logger(__name__, package=True)


@dataclass(kw_only=True)
class EquilibriumSolution:
    """Primal allocation and dual prices of the market at fixed charges."""

    tau: VolumetricCharges
    d: np.ndarray
    """Consumer demand per node, MWh."""
    l: np.ndarray  # noqa: E741
    """Prosumer consumption per node, MWh."""
    z_sell: np.ndarray
    z_buy: np.ndarray
    g_backup: np.ndarray
    g_units: np.ndarray
    """Output per unit, aligned with ``instance.units``."""
    y: np.ndarray
    """Net injection per node into the hub, MWh."""
    p: np.ndarray
    """LMP per node, $/MWh."""
    delta: np.ndarray
    kappa: np.ndarray
    rho: np.ndarray
    theta: float
    lambda_plus: np.ndarray
    lambda_minus: np.ndarray
    objective: float
    """Welfare value V(tau), $."""
    iterations: int = 0
    polished: bool = False
    constraint_rank: int = 0
    active_constraints: int = 0
    degenerate_prices: bool = False
    """Set when the active constraint gradients are dependent, so the LMPs need not be unique."""
    extras: dict[str, float] = field(default_factory=dict)

    @property
    def licq(self) -> bool:
        return self.constraint_rank == self.active_constraints

    @property
    def net_sales(self) -> np.ndarray:
        """``z_sell - z_buy`` per node."""
        return self.z_sell - self.z_buy

    def canonical_trades(self) -> tuple[np.ndarray, np.ndarray]:
        """Sales and purchases with at most one of them nonzero per node."""
        return canonicalize_net_position(self.z_sell, self.z_buy)


@overload
def canonicalize_net_position(z_sell: float, z_buy: float) -> tuple[float, float]: ...


@overload
def canonicalize_net_position(z_sell: np.ndarray, z_buy: np.ndarray) -> tuple[np.ndarray, np.ndarray]: ...


def canonicalize_net_position(z_sell, z_buy):  # type: ignore[no-untyped-def]
    """
    Replace gross trades by the equivalent net position.

    Example:
        >>> canonicalize_net_position(5.0, 3.0)
        (2.0, 0.0)
        >>> canonicalize_net_position(3.0, 7.0)
        (0.0, 4.0)
    """
    if np.ndim(z_sell) == 0 and np.ndim(z_buy) == 0:
        net = float(z_sell) - float(z_buy)
        return max(net, 0.0), max(-net, 0.0)
    net = np.asarray(z_sell, dtype=float) - np.asarray(z_buy, dtype=float)
    return np.maximum(net, 0.0), np.maximum(-net, 0.0)


def extract_solution(
    instance: MarketInstance, tau: VolumetricCharges, qp: QuadraticProgram, result: PrimalDualSolution
) -> EquilibriumSolution:
    """Map a primal-dual point of the welfare program back onto market quantities."""
    layout = qp.layout
    n = instance.n_nodes
    x = result.x

    def dense(indices: dict[int, int], values: np.ndarray) -> np.ndarray:
        out = np.zeros(n)
        for node, index in indices.items():
            out[node] = values[index]
        return out

    delta = np.zeros(n)
    for node, row in layout.prosumer_balance.items():
        delta[node] = result.eq_mult[row]
    return EquilibriumSolution(
        tau=tau,
        d=dense(layout.d, x),
        l=dense(layout.l, x),
        z_sell=dense(layout.z_sell, x),
        z_buy=dense(layout.z_buy, x),
        g_backup=dense(layout.g_backup, x),
        g_units=x[layout.units].copy(),
        y=x[layout.y].copy(),
        p=result.eq_mult[layout.nodal_balance].copy(),
        delta=delta,
        kappa=dense(layout.g_backup, result.upper_mult),
        rho=result.upper_mult[layout.units].copy(),
        theta=float(result.eq_mult[layout.system_balance]),
        lambda_plus=result.ineq_mult[layout.line_plus].copy(),
        lambda_minus=result.ineq_mult[layout.line_minus].copy(),
        objective=result.objective,
        iterations=result.iterations,
        polished=result.polished,
        constraint_rank=result.constraint_rank,
        active_constraints=result.active_constraints,
        degenerate_prices=not result.licq,
    )


def solve_equilibrium(
    instance: MarketInstance, tau: VolumetricCharges, settings: SolverSettings | None = None
) -> EquilibriumSolution:
    """
    Solve the market at charges ``tau``.

    Args:
        instance: A valid market instance.
        tau: Volumetric charges inside the tariff box.
        settings: Solver settings; defaults apply when omitted.

    Returns:
        The welfare-maximising allocation with its dual prices.

    Raises:
        TariffBoxError: If ``tau`` is outside the box.
        SolverError: If the welfare program cannot be solved.
    """
    try:
        qp = assemble_welfare_program(instance, tau)
        result = solve_qp(qp, settings)
    except TariffEquityException:
        raise
    except Exception as exc:
        raise SolverError(
            message=f"Failed to solve equilibrium at tau={tau}: {exc}",
            details={"tau_buy": tau.tau_buy, "tau_sell": tau.tau_sell},
        ) from exc
    solution = extract_solution(instance, tau, qp, result)
    if solution.degenerate_prices:
        logger.warning(
            f"Active constraints are linearly dependent at tau={tau} "
            f"(rank {solution.constraint_rank} < {solution.active_constraints}); LMPs may not be unique"
        )
    logger.info(f"Solved equilibrium at tau={tau} in {solution.iterations} iterations, V={solution.objective:.6f}")
    return solution
