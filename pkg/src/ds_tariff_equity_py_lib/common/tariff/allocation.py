"""
**File:** ``allocation.py``
**Region:** ``ds_tariff_equity_py_lib/common/tariff``

Description
-----------
Split a fixed budget across household groups so incidences are as equal as
possible, then pick the smallest charges among the equally fair splits.

With equilibrium quantities fixed the incidence of group ``j`` is
``(s_j + phi_j) / I_j``, so the equity gap is ``B = ||W phi + w0||^2`` for a
matrix ``W`` given by the equity measure. Stage one minimises ``B`` over
``phi >= 0`` with ``sum(n * phi) = budget``; every minimiser shares ``W phi``,
so stage two minimises ``||phi||^2`` over that affine slice. When the exact
equity system has a nonnegative least-norm solution it is returned directly.

Example
-------
.. code-block:: python

    import numpy as np

    from ds_tariff_equity_py_lib.common.tariff.allocation import allocate_budget

    phi, gap = allocate_budget(
        spends=np.array([1.0, 1.0]),
        incomes=np.array([100.0, 200.0]),
        households=np.array([1.0, 1.0]),
        budget=3.0,
    )
    # phi == [2/3, 7/3], gap == 0
"""

from collections.abc import Sequence

import numpy as np
from ds_common_logger_py_lib import Logger

from ..equilibrium.charges import VolumetricCharges
from ..equilibrium.program import QuadraticProgram, VariableLayout
from ..equilibrium.settings import SolverSettings
from ..equilibrium.solution import EquilibriumSolution
from ..equilibrium.solver import solve_qp
from ..errors import PreconditionError, SolverError
from ..market.enums import EquityMeasure, GroupKind
from ..market.models import MarketInstance
from .incidence import group_spends, incidence
from .models import FixedCharges, GroupKey, IncidenceReport

logger = Logger.get_logger(__name__, package=True)

EXACT_TOLERANCE = 1e-12
RANK_TOLERANCE = 1e-10


def gap_matrix(
    spends: np.ndarray,
    incomes: np.ndarray,
    measure: EquityMeasure = EquityMeasure.ALL_GROUPS,
    pairs: Sequence[tuple[int, int]] = (),
) -> tuple[np.ndarray, np.ndarray]:
    """
    ``(W, w0)`` with ``B(phi) = ||W phi + w0||^2``.

    Args:
        spends: Per-household spending before fixed charges.
        incomes: Per-household incomes.
        measure: Aggregation of incidence differences.
        pairs: ``(consumer, prosumer)`` positions compared under ``NODAL_PAIRS``.
    """
    k = spends.shape[0]
    if measure == EquityMeasure.NODAL_PAIRS:
        rows = np.zeros((len(pairs), k))
        for r, (i, j) in enumerate(pairs):
            rows[r, i] = 1.0
            rows[r, j] = -1.0
    else:
        rows = np.eye(k) - np.full((k, k), 1.0 / k)
    return rows / incomes, rows @ (spends / incomes)


def nodal_pairs(keys: Sequence[GroupKey]) -> list[tuple[int, int]]:
    """Positions of the consumer and prosumer group sharing a node, for every such node."""
    position = {key: index for index, key in enumerate(keys)}
    return [
        (position[(GroupKind.CONSUMER, node)], position[(GroupKind.PROSUMER, node)])
        for kind, node in keys
        if kind == GroupKind.CONSUMER and (GroupKind.PROSUMER, node) in position
    ]


def _nonnegative_qp(
    quadratic: np.ndarray, linear: np.ndarray, eq_matrix: np.ndarray, eq_rhs: np.ndarray
) -> QuadraticProgram:
    layout = VariableLayout()
    for j in range(linear.shape[0]):
        layout.add_variable(f"phi[{j}]")
    n = linear.shape[0]
    return QuadraticProgram(
        layout=layout,
        quadratic=quadratic,
        linear=linear,
        eq_matrix=eq_matrix,
        eq_rhs=eq_rhs,
        ineq_matrix=np.zeros((0, n)),
        ineq_rhs=np.zeros(0),
        lower=np.zeros(n),
        upper=np.full(n, np.inf),
    )


def allocate_budget(
    spends: np.ndarray,
    incomes: np.ndarray,
    households: np.ndarray,
    budget: float,
    measure: EquityMeasure = EquityMeasure.ALL_GROUPS,
    pairs: Sequence[tuple[int, int]] = (),
    settings: SolverSettings | None = None,
) -> tuple[np.ndarray, float]:
    """
    Fairest nonnegative split of ``budget``, smallest in norm among ties.

    Returns:
        ``(phi, B)``.

    Raises:
        PreconditionError: If the budget is negative or there is nobody to charge.
    """
    spends = np.asarray(spends, dtype=float)
    incomes = np.asarray(incomes, dtype=float)
    households = np.asarray(households, dtype=float)
    if budget < 0:
        raise PreconditionError(message=f"Fixed budget must be >= 0, got {budget}", details={"budget": budget})
    w, w0 = gap_matrix(spends, incomes, measure, pairs)

    def gap(phi: np.ndarray) -> float:
        return float(np.sum((w @ phi + w0) ** 2))

    k = spends.shape[0]
    if budget == 0 or k == 0:
        phi = np.zeros(k)
        return phi, gap(phi)
    total_households = float(households.sum())
    if total_households <= 0:
        raise PreconditionError(
            message="Cannot allocate a positive budget without households", details={"budget": budget}
        )

    # charges in units of the mean charge keep the programs well scaled
    unit = budget / total_households
    shares = households / total_households
    ws = w * unit
    system = np.vstack([ws, shares[None, :]])
    target = np.concatenate([-w0, [1.0]])
    exact = np.linalg.lstsq(system, target, rcond=None)[0]
    exact_scale = 1.0 + float(np.max(np.abs(target)))
    if np.max(np.abs(system @ exact - target)) <= EXACT_TOLERANCE * exact_scale and np.all(exact >= -EXACT_TOLERANCE):
        phi = np.maximum(exact, 0.0) * unit
        logger.debug(f"Exact equity split found for budget {budget:.6f}")
        return phi, gap(phi)

    scale = max(float(np.max(np.sum(ws**2, axis=0))), float(w0 @ w0), np.finfo(float).tiny)
    stage_one = solve_qp(
        _nonnegative_qp(-2.0 * ws.T @ ws / scale, -2.0 * ws.T @ w0 / scale, shares[None, :], np.array([1.0])),
        settings,
    )
    psi_star = np.maximum(stage_one.x, 0.0)
    gap_star = gap(psi_star * unit)

    _, singular, vt = np.linalg.svd(ws, full_matrices=False)
    rank = int(np.sum(singular > RANK_TOLERANCE * max(float(singular[0]) if singular.size else 0.0, 1.0)))
    slice_rows = np.vstack([vt[:rank], shares[None, :]])
    slice_rhs = np.concatenate([vt[:rank] @ psi_star, [1.0]])
    psi = psi_star
    try:
        stage_two = solve_qp(_nonnegative_qp(-2.0 * np.eye(k), np.zeros(k), slice_rows, slice_rhs), settings)
        candidate = np.maximum(stage_two.x, 0.0)
        tolerance = max(1e-12, 1e-9 * gap_star)
        if gap(candidate * unit) <= gap_star + tolerance:
            psi = candidate
        else:
            logger.warning("Least-norm charges left the fairest set; keeping the stage-one split")
    except SolverError as exc:
        logger.warning(f"Least-norm refinement failed ({exc}); keeping the stage-one split")
    phi = psi * unit
    logger.debug(f"Equity split for budget {budget:.6f}: B={gap(phi):.3e}")
    return phi, gap(phi)


def allocate_fixed_charges(
    instance: MarketInstance,
    tau: VolumetricCharges,
    sol: EquilibriumSolution,
    fixed_budget: float,
    settings: SolverSettings | None = None,
) -> tuple[FixedCharges, IncidenceReport]:
    """
    Allocate ``fixed_budget`` over the populated groups of ``instance``.

    Returns:
        The fixed charges and the incidences they produce.

    Raises:
        PreconditionError: If ``fixed_budget`` is negative.
    """
    items = group_spends(instance, tau, sol)
    keys = [item.key for item in items]
    phi, _ = allocate_budget(
        spends=np.array([item.spend for item in items]),
        incomes=np.array([item.income for item in items]),
        households=np.array([item.households for item in items]),
        budget=fixed_budget,
        measure=instance.equity_measure,
        pairs=nodal_pairs(keys),
        settings=settings,
    )
    charges = FixedCharges.from_vector(keys, phi)
    report = incidence(instance, tau, charges, sol)
    logger.info(f"Allocated fixed budget {fixed_budget:.2f} over {len(keys)} groups, B={report.gap_B:.3e}")
    return charges, report
