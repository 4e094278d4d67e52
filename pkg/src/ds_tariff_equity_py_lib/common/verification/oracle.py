"""
**File:** ``oracle.py``
**Region:** ``ds_tariff_equity_py_lib/common/verification``

Description
-----------
Brute-force equilibrium oracle for tiny instances.

Every subset of the stacked inequalities (line rows and finite variable
bounds) is treated as tight in turn; the equality-constrained stationarity
system of that subset is solved in the least-squares sense and the candidate
is kept when it is primal feasible with sign-correct multipliers. The best
objective wins and the lowest subset index wins ties, so the result does not
depend on evaluation order.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.verification.oracle import OracleBudget, enumerate_active_sets

    sol = enumerate_active_sets(instance, VolumetricCharges(), OracleBudget(max_inequalities=12))
"""

from dataclasses import dataclass

import numpy as np
from ds_common_logger_py_lib import Logger
from ds_common_serde_py_lib import Serializable

from ..equilibrium.charges import VolumetricCharges
from ..equilibrium.program import QuadraticProgram, assemble_welfare_program
from ..equilibrium.solution import EquilibriumSolution, extract_solution
from ..equilibrium.solver import StackedInequalities, build_primal_dual, solve_equality_kkt, stack_inequalities
from ..errors import NoCandidateError, OracleBudgetError, PreconditionError
from ..market.models import MarketInstance

logger = Logger.get_logger(__name__, package=True)

ORACLE_CEILING = 25
MULTIPLIER_TOLERANCE = 1e-9


@dataclass(kw_only=True)
class OracleBudget(Serializable):
    """Limits of the enumeration."""

    max_inequalities: int = 20
    """At most ``2 ** max_inequalities`` subsets are visited."""
    tolerance: float = 1e-6
    """Agreement tolerance used when the oracle is compared with the solver."""

    def __post_init__(self) -> None:
        if not 0 <= self.max_inequalities <= ORACLE_CEILING:
            raise PreconditionError(
                message=f"max_inequalities must lie in [0, {ORACLE_CEILING}]",
                details={"max_inequalities": self.max_inequalities},
            )
        if not self.tolerance > 0:
            raise PreconditionError(message="tolerance must be > 0", details={"tolerance": self.tolerance})


def _exclusive_pairs(qp: QuadraticProgram, stacked: StackedInequalities) -> list[tuple[int, int]]:
    """Row pairs that cannot be tight together: both bounds of a variable, both directions of a line."""
    upper_row = {var: row for row, var, kind in stacked.bound_rows() if kind == "upper"}
    pairs = [
        (upper_row[var], row)
        for row, var, kind in stacked.bound_rows()
        if kind == "lower" and var in upper_row and qp.lower[var] < qp.upper[var]
    ]
    layout = qp.layout
    pairs.extend(
        (plus, minus)
        for plus, minus, limit in zip(layout.line_plus, layout.line_minus, qp.ineq_rhs[layout.line_plus], strict=True)
        if limit > 0
    )
    return pairs


def enumerate_active_sets(
    instance: MarketInstance, tau: VolumetricCharges, budget: OracleBudget | None = None
) -> EquilibriumSolution:
    """
    Solve the market at ``tau`` by exhaustive active-set enumeration.

    Args:
        instance: A valid, tiny market instance.
        tau: Volumetric charges inside the tariff box.
        budget: Enumeration limits.

    Returns:
        The best KKT candidate as an equilibrium solution.

    Raises:
        OracleBudgetError: If the instance has more inequalities than the budget allows.
        NoCandidateError: If no subset yields a feasible, sign-correct point.
    """
    budget = budget or OracleBudget()
    qp = assemble_welfare_program(instance, tau)
    stacked = stack_inequalities(qp)
    m = stacked.size
    if m > budget.max_inequalities:
        raise OracleBudgetError(
            message=f"Instance has {m} inequalities, enumeration budget is {budget.max_inequalities}",
            details={"inequalities": m, "max_inequalities": budget.max_inequalities},
        )

    hessian, gradient = -qp.quadratic, -qp.linear
    matrix, rhs = stacked.matrix, stacked.rhs
    feasibility = 1e-9 * (1.0 + float(np.max(np.abs(rhs), initial=0.0)))
    stationarity = 1e-9 * (1.0 + float(np.max(np.abs(gradient), initial=0.0)))
    exclusive = _exclusive_pairs(qp, stacked)
    bits = np.arange(m)

    best: tuple[float, int, np.ndarray, np.ndarray, np.ndarray, np.ndarray] | None = None
    visited = 0
    for subset in range(1 << m):
        active = ((subset >> bits) & 1).astype(bool)
        if any(active[i] and active[j] for i, j in exclusive):
            continue
        visited += 1
        eq_matrix = np.vstack([qp.eq_matrix, matrix[active]])
        eq_rhs = np.concatenate([qp.eq_rhs, rhs[active]])
        x, mult, residual = solve_equality_kkt(hessian, gradient, eq_matrix, eq_rhs)
        if residual > max(feasibility, stationarity):
            continue
        z_active = mult[qp.eq_rhs.shape[0] :]
        if np.any(z_active < -MULTIPLIER_TOLERANCE) or np.any(rhs - matrix @ x < -feasibility):
            continue
        value = qp.objective(x)
        if best is None or value > best[0] + 1e-12 * (1.0 + abs(best[0])):
            z = np.zeros(m)
            z[active] = np.maximum(z_active, 0.0)
            best = (value, subset, x, mult[: qp.eq_rhs.shape[0]], z, active)

    if best is None:
        raise NoCandidateError(
            message=f"No feasible active set among {visited} subsets at tau={tau}",
            details={"subsets": visited, "inequalities": m},
        )
    value, subset, x, y, z, active = best
    logger.info(f"Active-set oracle visited {visited} subsets; best subset {subset} with V={value:.6f}")
    result = build_primal_dual(qp, stacked, x, y, z, iterations=visited, polished=True, active=active)
    return extract_solution(instance, tau, qp, result)
