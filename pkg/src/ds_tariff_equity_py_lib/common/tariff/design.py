"""
**File:** ``design.py``
**Region:** ``ds_tariff_equity_py_lib/common/tariff``

Description
-----------
Retail tariff design: the zero-volumetric optimal tariff and tariffs that
recover a fixed fraction of the cost target through volumetric charges.

For a fraction ``f`` the buy charge is pinned by the revenue equality at each
sell charge: the revenue curve is scanned upwards from the smallest
admissible ``tau_buy`` and the first crossing is refined with Brent's method,
which selects the smaller root of a Laffer-shaped curve. The sell charge is
chosen by a coarse grid refined with bounded Brent between the neighbours of
the best grid point. The fixed budget of every candidate is the cost target
minus the volumetric revenue it actually achieves.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.tariff import FractionPolicy, constrained_tariff

    outcome = constrained_tariff(instance, FractionPolicy(fraction=0.1))
    print(outcome.tau, outcome.phi, outcome.incidence.gap_B)
"""

import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from ds_common_logger_py_lib import Logger
from scipy.optimize import brentq, minimize_scalar

from ..equilibrium.charges import TariffBox, VolumetricCharges, tariff_box
from ..equilibrium.settings import SolverSettings
from ..equilibrium.solution import solve_equilibrium
from ..equilibrium.surplus import surplus_decomposition
from ..errors import SolverError, UnattainableFractionError
from ..market.models import MarketInstance
from .allocation import allocate_fixed_charges
from .incidence import revenue, volumetric_revenue
from .models import FractionPolicy, TariffOutcome, TariffSearchSettings

logger = Logger.get_logger(__name__, package=True)

REVENUE_TOLERANCE = 1e-9


def evaluate_tariff(
    instance: MarketInstance,
    tau: VolumetricCharges,
    fixed_budget: float | None = None,
    equity_weight: float | None = None,
    fraction: float = 0.0,
    solver: SolverSettings | None = None,
) -> TariffOutcome:
    """
    Solve the market at ``tau`` and allocate ``fixed_budget`` as fixed charges.

    Without a budget the fixed charges cover whatever the achieved volumetric
    revenue leaves of the cost target.
    """
    sol = solve_equilibrium(instance, tau, solver)
    if fixed_budget is None:
        fixed_budget = max(instance.fixed_cost_target - volumetric_revenue(tau, sol), 0.0)
    phi, report = allocate_fixed_charges(instance, tau, sol, fixed_budget, solver)
    return TariffOutcome(
        tau=tau,
        phi=phi,
        solution=sol,
        incidence=report,
        revenue=revenue(instance, tau, phi, sol),
        surplus=surplus_decomposition(instance, tau, sol),
        equity_weight=instance.effective_equity_weight if equity_weight is None else equity_weight,
        fraction=fraction,
    )


def optimal_tariff(
    instance: MarketInstance, equity_weight: float | None = None, solver: SolverSettings | None = None
) -> TariffOutcome:
    """
    Zero volumetric charges with the whole cost target recovered by fixed charges.

    Zero charges maximise welfare over the tariff box, so equity is left
    entirely to the fixed-charge allocation.
    """
    outcome = evaluate_tariff(
        instance, VolumetricCharges(), instance.fixed_cost_target, equity_weight=equity_weight, solver=solver
    )
    logger.info(
        f"Optimal tariff: V={outcome.welfare:.6f}, B={outcome.incidence.gap_B:.3e}, "
        f"revenue residual {outcome.revenue.residual:.3e}"
    )
    return outcome


class _FractionSearch:
    """Candidate evaluation at fixed ``tau_sell`` with a shared cache."""

    def __init__(
        self,
        instance: MarketInstance,
        box: TariffBox,
        policy: FractionPolicy,
        settings: TariffSearchSettings,
        solver: SolverSettings | None,
    ) -> None:
        self.instance = instance
        self.box = box
        self.policy = policy
        self.settings = settings
        self.solver = solver
        self.required = policy.fraction * instance.fixed_cost_target
        self.max_revenue = -np.inf
        self._cache: dict[float, TariffOutcome | None] = {}
        self._lock = threading.Lock()

    def _revenue(self, tau_buy: float, tau_sell: float) -> float:
        tau = VolumetricCharges(tau_buy=tau_buy, tau_sell=tau_sell)
        value = volumetric_revenue(tau, solve_equilibrium(self.instance, tau, self.solver))
        with self._lock:
            self.max_revenue = max(self.max_revenue, value)
        return value

    def _buy_root(self, tau_sell: float) -> float | None:
        """Smallest ``tau_buy`` raising the required revenue at ``tau_sell``."""
        low = max(0.0, tau_sell)
        if low > self.box.tau_buy_max:
            return None
        tolerance = REVENUE_TOLERANCE * max(self.instance.fixed_cost_target, 1.0)
        points = np.linspace(low, self.box.tau_buy_max, self.settings.revenue_scan_points)
        previous = float(points[0])
        gap = self._revenue(previous, tau_sell) - self.required
        if abs(gap) <= tolerance:
            return previous
        if gap > 0:
            logger.debug(f"tau_sell={tau_sell:.6g}: revenue already exceeds the target at tau_buy={previous:.6g}")
            return None
        for point in points[1:]:
            gap = self._revenue(float(point), tau_sell) - self.required
            if gap >= 0:
                return float(
                    brentq(
                        lambda tau_buy: self._revenue(tau_buy, tau_sell) - self.required,
                        previous,
                        float(point),
                        xtol=self.settings.root_xtol,
                    )
                )
            previous = float(point)
        logger.debug(f"tau_sell={tau_sell:.6g}: no tau_buy reaches revenue {self.required:.2f}")
        return None

    def candidate(self, tau_sell: float) -> TariffOutcome | None:
        key = float(tau_sell)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        outcome: TariffOutcome | None = None
        try:
            tau_buy = self._buy_root(key)
            if tau_buy is not None:
                tau = VolumetricCharges(tau_buy=tau_buy, tau_sell=key)
                outcome = evaluate_tariff(
                    self.instance,
                    tau,
                    equity_weight=self.policy.weight(self.instance),
                    fraction=self.policy.fraction,
                    solver=self.solver,
                )
                logger.debug(f"Candidate tau={tau}: objective {outcome.objective:.6f}")
        except SolverError as exc:
            logger.debug(f"Candidate tau_sell={key:.6g} failed: {exc.message}")
        with self._lock:
            return self._cache.setdefault(key, outcome)


def constrained_tariff(
    instance: MarketInstance,
    policy: FractionPolicy,
    settings: TariffSearchSettings | None = None,
    solver: SolverSettings | None = None,
) -> TariffOutcome:
    """
    Best tariff recovering ``policy.fraction`` of the cost target volumetrically.

    Maximises ``Pi - M * B`` subject to the revenue equality. Instances
    without prosumers fix ``tau_sell = 0``; ``fraction = 0`` is the optimal
    tariff.

    Raises:
        UnattainableFractionError: If no admissible charge raises the required revenue.
    """
    settings = settings or TariffSearchSettings()
    if policy.fraction == 0.0:
        return optimal_tariff(instance, policy.equity_weight, solver)

    box = tariff_box(instance)
    search = _FractionSearch(instance, box, policy, settings, solver)
    has_prosumers = bool(instance.prosumer_nodes())
    if has_prosumers:
        grid = np.union1d(np.linspace(box.tau_sell_min, box.tau_buy_max, settings.outer_grid_points), [0.0])
    else:
        grid = np.array([0.0])

    if settings.max_workers and settings.max_workers > 1 and grid.size > 1:
        with ThreadPoolExecutor(max_workers=settings.max_workers) as pool:
            outcomes = list(pool.map(search.candidate, grid))
    else:
        outcomes = [search.candidate(value) for value in grid]

    scores = np.array([outcome.objective if outcome else -np.inf for outcome in outcomes])
    if not np.isfinite(scores).any():
        raise UnattainableFractionError(
            message=(
                f"Volumetric revenue {search.required:.2f} is unattainable; "
                f"the most any admissible charge raises is {search.max_revenue:.2f}"
            ),
            details={
                "fraction": policy.fraction,
                "required_revenue": search.required,
                "max_volumetric_revenue": float(search.max_revenue),
            },
        )
    index = int(np.argmax(scores))
    best = outcomes[index]
    assert best is not None

    if has_prosumers and settings.refine_maxiter > 0:
        low, high = float(grid[max(index - 1, 0)]), float(grid[min(index + 1, grid.size - 1)])
        penalty = 1e6 * (1.0 + abs(best.objective))

        def loss(tau_sell: float) -> float:
            outcome = search.candidate(tau_sell)
            return -outcome.objective if outcome else penalty

        if high > low:
            result = minimize_scalar(
                loss,
                bounds=(low, high),
                method="bounded",
                options={"xatol": settings.refine_xatol, "maxiter": settings.refine_maxiter},
            )
            refined = search.candidate(float(result.x))
            if refined is not None and refined.objective > best.objective + 1e-12 * (1.0 + abs(best.objective)):
                best = refined

    logger.info(
        f"Constrained tariff f={policy.fraction:g}: tau={best.tau}, V={best.welfare:.6f}, "
        f"B={best.incidence.gap_B:.3e}, objective {best.objective:.6f}"
    )
    return best
