"""
**File:** ``evaluation.py``
**Region:** ``ds_tariff_equity_py_lib/common/stochastic``

Description
-----------
Expected welfare ``EV(tau)`` over a scenario set, the probability that the
utility recovers its cost target, and a grid search for the best tariff under
a revenue chance constraint.

Fixed charges under uncertainty are allocated from expected spending, with
the budget set to the cost target minus the expected volumetric revenue. The
report also carries the expectation of the per-scenario equity gap, the
alternative way of scoring equity when incidences vary by scenario.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.equilibrium.charges import VolumetricCharges
    from ds_tariff_equity_py_lib.common.stochastic.evaluation import ev_estimate, stochastic_optimal_check

    ev = ev_estimate(scenario_set, VolumetricCharges())
    report = stochastic_optimal_check(scenario_set)
    assert report.passed
"""

import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import pandas as pd
from ds_common_logger_py_lib import Logger
from ds_common_serde_py_lib import Serializable

from ..equilibrium.charges import VolumetricCharges, tariff_box, tau_grid
from ..equilibrium.settings import SolverSettings
from ..equilibrium.solution import EquilibriumSolution, solve_equilibrium
from ..equilibrium.value import select_best
from ..errors import PreconditionError, ScenarioSolveError, SolverError
from ..market.enums import GroupKind
from ..tariff.allocation import allocate_budget, nodal_pairs
from ..tariff.incidence import equity_gap_B, group_spends, incidence, volumetric_revenue
from ..tariff.models import FixedCharges, IncidenceReport
from .scenarios import ScenarioSet

logger = Logger.get_logger(__name__, package=True)

EV_COLUMNS = ("tau_buy", "tau_sell", "EV")
CHANCE_COLUMNS = (
    "tau_buy",
    "tau_sell",
    "EV",
    "expected_volumetric_revenue",
    "fixed_revenue",
    "probability",
    "gap_B",
    "gap_B_per_scenario_mean",
    "objective",
    "admissible",
)


@dataclass(kw_only=True)
class ChanceSettings(Serializable):
    """Revenue chance constraint: adequacy must hold with probability ``1 - epsilon``."""

    epsilon: float = 0.1
    tolerance: float = 1e-6
    """Relative slack on the cost target when a scenario is counted as adequate."""
    max_workers: int | None = None
    """Threads used for per-scenario solves; ``None`` runs serially."""

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            raise PreconditionError(
                message=f"epsilon must lie in (0, 1), got {self.epsilon}", details={"epsilon": self.epsilon}
            )
        if self.tolerance < 0:
            raise PreconditionError(message="tolerance must be >= 0", details={"tolerance": self.tolerance})

    @property
    def required_probability(self) -> float:
        return 1.0 - self.epsilon


def scenario_solutions(
    scenario_set: ScenarioSet,
    tau: VolumetricCharges,
    solver: SolverSettings | None = None,
    max_workers: int | None = None,
) -> list[EquilibriumSolution]:
    """
    Solve every scenario at ``tau``, in scenario order.

    Raises:
        ScenarioSolveError: If any scenario fails; ``details["scenario"]`` is its index.
    """

    def solve(index: int) -> EquilibriumSolution:
        try:
            return solve_equilibrium(scenario_set.instances[index], tau, solver)
        except SolverError as exc:
            name = scenario_set.scenarios[index].name
            raise ScenarioSolveError(
                message=f"Scenario {index} ({name}) failed at tau={tau}: {exc.message}",
                details={"scenario": index, "name": name, "cause": exc.code},
            ) from exc

    indices = range(len(scenario_set.scenarios))
    if max_workers and max_workers > 1 and len(indices) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(solve, indices))
    return [solve(index) for index in indices]


def _expectation(scenario_set: ScenarioSet, values: Sequence[float]) -> float:
    return math.fsum(prob * value for prob, value in zip(scenario_set.probabilities, values, strict=True))


def ev_estimate(
    scenario_set: ScenarioSet,
    tau: VolumetricCharges,
    solver: SolverSettings | None = None,
    max_workers: int | None = None,
) -> float:
    """``sum_s prob_s * V_s(tau)``, summed in scenario order."""
    solutions = scenario_solutions(scenario_set, tau, solver, max_workers)
    value = _expectation(scenario_set, [sol.objective for sol in solutions])
    logger.debug(f"EV at tau={tau} over {len(solutions)} scenario(s): {value:.6f}")
    return value


def ev_grid(
    scenario_set: ScenarioSet,
    grid: Sequence[VolumetricCharges],
    solver: SolverSettings | None = None,
    max_workers: int | None = None,
) -> pd.DataFrame:
    """
    ``EV`` at every point of ``grid`` plus one ``V_<scenario>`` column per scenario.

    Rows keep the order of ``grid``.
    """
    rows = []
    for tau in grid:
        solutions = scenario_solutions(scenario_set, tau, solver, max_workers)
        values = [sol.objective for sol in solutions]
        row = {"tau_buy": tau.tau_buy, "tau_sell": tau.tau_sell, "EV": _expectation(scenario_set, values)}
        row.update({f"V_{s.name}": value for s, value in zip(scenario_set.scenarios, values, strict=True)})
        rows.append(row)
    columns = [*EV_COLUMNS, *(f"V_{s.name}" for s in scenario_set.scenarios)]
    return pd.DataFrame(rows, columns=columns)


def chance_revenue_probability(
    scenario_set: ScenarioSet,
    tau: VolumetricCharges,
    phi: FixedCharges,
    chance: ChanceSettings | None = None,
    solver: SolverSettings | None = None,
    solutions: Sequence[EquilibriumSolution] | None = None,
) -> float:
    """
    Probability that volumetric plus fixed revenue reaches the cost target.

    Fixed revenue does not depend on the scenario. Precomputed ``solutions``
    at ``tau`` may be passed in scenario order.
    """
    chance = chance or ChanceSettings()
    if solutions is None:
        solutions = scenario_solutions(scenario_set, tau, solver, chance.max_workers)
    target = scenario_set.base.fixed_cost_target
    fixed = phi.revenue(scenario_set.base)
    slack = chance.tolerance * max(abs(target), 1.0)
    adequate = [volumetric_revenue(tau, sol) + fixed >= target - slack for sol in solutions]
    return math.fsum(prob for prob, ok in zip(scenario_set.probabilities, adequate, strict=True) if ok)


@dataclass(kw_only=True)
class StochasticCheckReport(Serializable):
    """Outcome of maximising ``EV`` over a grid that contains the origin."""

    value_at_origin: float
    best_tau_buy: float
    best_tau_sell: float
    best_value: float
    margin: float
    """``EV(0, 0)`` minus the best value elsewhere on the grid."""
    grid_points: int = 0
    scenarios: int = 0
    passed: bool = False


def stochastic_optimal_check(
    scenario_set: ScenarioSet,
    grid: Sequence[VolumetricCharges] | None = None,
    solver: SolverSettings | None = None,
    tolerance: float = 1e-6,
    max_workers: int | None = None,
    table: pd.DataFrame | None = None,
) -> StochasticCheckReport:
    """
    Check that zero volumetric charges maximise expected welfare on ``grid``.

    The default grid is 5 by 5 over the base instance's tariff box. A table
    already produced by ``ev_grid`` for the same grid may be passed to avoid
    solving again.
    The best point is the origin whenever it is within tolerance of the maximum.

    Raises:
        PreconditionError: If ``grid`` does not contain the origin.
    """
    points = list(grid) if grid is not None else tau_grid(tariff_box(scenario_set.base), 5, 5)
    if not any(tau.is_zero for tau in points):
        raise PreconditionError(message="Expected-value grid must contain tau = (0, 0)")
    if table is None:
        table = ev_grid(scenario_set, points, solver, max_workers)
    values = table["EV"].to_numpy(dtype=float)
    origin = next(index for index, tau in enumerate(points) if tau.is_zero)
    v0 = float(values[origin])
    best = select_best(values, origin, tolerance)
    others = np.delete(values, origin)
    best_other = float(others.max()) if others.size else -float("inf")
    report = StochasticCheckReport(
        value_at_origin=v0,
        best_tau_buy=points[best].tau_buy,
        best_tau_sell=points[best].tau_sell,
        best_value=float(values[best]),
        margin=v0 - best_other,
        grid_points=len(points),
        scenarios=len(scenario_set.scenarios),
        passed=best_other <= v0 + tolerance * (1.0 + abs(v0)),
    )
    message = f"Stochastic check over {len(points)} points: EV(0,0)={v0:.6f}, margin={report.margin:.3e}"
    if report.passed:
        logger.info(f"{message}, PASS")
    else:
        logger.warning(f"{message}, FLAGGED")
    return report


@dataclass(kw_only=True)
class ExpectedAllocation:
    """Fixed charges allocated on expected spending, with both equity scores."""

    phi: FixedCharges
    incidence: IncidenceReport
    """Incidence of expected spending."""
    gap_B_per_scenario_mean: float
    """Expectation of the equity gap computed scenario by scenario."""
    fixed_budget: float
    expected_volumetric_revenue: float


def expected_allocation(
    scenario_set: ScenarioSet,
    tau: VolumetricCharges,
    solutions: Sequence[EquilibriumSolution],
    fixed_budget: float | None = None,
    solver: SolverSettings | None = None,
) -> ExpectedAllocation:
    """
    Allocate fixed charges on expected group spending at ``tau``.

    Without a budget the charges cover the cost target minus the expected
    volumetric revenue, clamped at zero.
    """
    base = scenario_set.base
    expected_volumetric = _expectation(scenario_set, [volumetric_revenue(tau, sol) for sol in solutions])
    if fixed_budget is None:
        fixed_budget = max(base.fixed_cost_target - expected_volumetric, 0.0)
    per_scenario = [
        group_spends(instance, tau, sol) for instance, sol in zip(scenario_set.instances, solutions, strict=True)
    ]
    first = per_scenario[0]
    keys = [item.key for item in first]
    spends = np.array(
        [_expectation(scenario_set, [items[j].spend for items in per_scenario]) for j in range(len(keys))],
        dtype=float,
    )
    incomes = np.array([item.income for item in first], dtype=float)
    phi_values, _ = allocate_budget(
        spends=spends,
        incomes=incomes,
        households=np.array([item.households for item in first], dtype=float),
        budget=fixed_budget,
        measure=base.equity_measure,
        pairs=nodal_pairs(keys),
        settings=solver,
    )
    phi = FixedCharges.from_vector(keys, phi_values)
    inc_con: dict[int, float] = {}
    inc_pro: dict[int, float] = {}
    for (kind, node), spend, charge, income in zip(keys, spends, phi_values, incomes, strict=True):
        (inc_con if kind == GroupKind.CONSUMER else inc_pro)[node] = float((spend + charge) / income)
    expected = IncidenceReport(
        inc_con=inc_con,
        inc_pro=inc_pro,
        gap_B=equity_gap_B(inc_con, inc_pro, base.equity_measure),
        measure=base.equity_measure,
    )
    per_scenario_gap = _expectation(
        scenario_set,
        [
            incidence(instance, tau, phi, sol).gap_B
            for instance, sol in zip(scenario_set.instances, solutions, strict=True)
        ],
    )
    return ExpectedAllocation(
        phi=phi,
        incidence=expected,
        gap_B_per_scenario_mean=per_scenario_gap,
        fixed_budget=fixed_budget,
        expected_volumetric_revenue=expected_volumetric,
    )


@dataclass(kw_only=True)
class ChanceConstrainedResult:
    """Grid table of the chance-constrained search and its best admissible point."""

    table: pd.DataFrame
    best_index: int | None
    """Row of ``table`` with the best admissible objective; ``None`` if no row is admissible."""
    best: ExpectedAllocation | None
    chance: ChanceSettings

    @property
    def best_tau(self) -> VolumetricCharges | None:
        if self.best_index is None:
            return None
        row = self.table.iloc[self.best_index]
        return VolumetricCharges(tau_buy=float(row["tau_buy"]), tau_sell=float(row["tau_sell"]))

    @property
    def admissible_points(self) -> int:
        return int(self.table["admissible"].sum())


def chance_constrained_tariff(
    scenario_set: ScenarioSet,
    grid: Sequence[VolumetricCharges] | None = None,
    chance: ChanceSettings | None = None,
    solver: SolverSettings | None = None,
    equity_weight: float | None = None,
) -> ChanceConstrainedResult:
    """
    Grid search for the tariff maximising ``EV - M * B`` under the revenue chance constraint.

    Each grid point is scored with fixed charges from ``expected_allocation``;
    a point is admissible when the adequacy probability is at least
    ``1 - epsilon``. The first grid point wins ties.
    """
    chance = chance or ChanceSettings()
    points = list(grid) if grid is not None else tau_grid(tariff_box(scenario_set.base), 5, 5)
    weight = scenario_set.base.effective_equity_weight if equity_weight is None else equity_weight
    rows = []
    allocations: list[ExpectedAllocation] = []
    for tau in points:
        solutions = scenario_solutions(scenario_set, tau, solver, chance.max_workers)
        allocation = expected_allocation(scenario_set, tau, solutions, solver=solver)
        probability = chance_revenue_probability(scenario_set, tau, allocation.phi, chance, solutions=solutions)
        ev = _expectation(scenario_set, [sol.objective for sol in solutions])
        objective = ev - weight * allocation.incidence.gap_B
        admissible = probability >= chance.required_probability - 1e-12
        logger.debug(f"Chance grid tau={tau}: EV={ev:.6f}, P={probability:.4f}, admissible={admissible}")
        allocations.append(allocation)
        rows.append(
            {
                "tau_buy": tau.tau_buy,
                "tau_sell": tau.tau_sell,
                "EV": ev,
                "expected_volumetric_revenue": allocation.expected_volumetric_revenue,
                "fixed_revenue": allocation.phi.revenue(scenario_set.base),
                "probability": probability,
                "gap_B": allocation.incidence.gap_B,
                "gap_B_per_scenario_mean": allocation.gap_B_per_scenario_mean,
                "objective": objective,
                "admissible": admissible,
            }
        )
    table = pd.DataFrame(rows, columns=list(CHANCE_COLUMNS))
    scores = np.where(table["admissible"].to_numpy(dtype=bool), table["objective"].to_numpy(dtype=float), -np.inf)
    best_index = int(np.argmax(scores)) if np.isfinite(scores).any() else None
    if best_index is None:
        logger.warning(f"No grid point satisfies the revenue chance constraint at epsilon={chance.epsilon:g}")
        best = None
    else:
        best = allocations[best_index]
        logger.info(
            f"Chance-constrained tariff: tau={points[best_index]}, "
            f"objective {table['objective'].iloc[best_index]:.6f}, "
            f"{int(table['admissible'].sum())}/{len(points)} admissible"
        )
    return ChanceConstrainedResult(table=table, best_index=best_index, best=best, chance=chance)
