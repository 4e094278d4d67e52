"""
**File:** ``test_evaluation.py``
**Region:** ``tests/common/stochastic``

Description
-----------
Tests for expected welfare, the revenue chance constraint and the stochastic search.
"""

import pandas as pd
import pytest

from ds_tariff_equity_py_lib.common.equilibrium.charges import VolumetricCharges, tariff_box, tau_grid
from ds_tariff_equity_py_lib.common.equilibrium.solution import solve_equilibrium
from ds_tariff_equity_py_lib.common.errors import InfeasibleError, PreconditionError, ScenarioSolveError
from ds_tariff_equity_py_lib.common.stochastic import evaluation
from ds_tariff_equity_py_lib.common.stochastic.evaluation import (
    CHANCE_COLUMNS,
    ChanceSettings,
    chance_constrained_tariff,
    chance_revenue_probability,
    ev_estimate,
    ev_grid,
    expected_allocation,
    scenario_solutions,
    stochastic_optimal_check,
)
from ds_tariff_equity_py_lib.common.stochastic.scenarios import ScenarioSet
from ds_tariff_equity_py_lib.common.tariff.models import FixedCharges


@pytest.fixture
def small_grid(calibrated):
    """A 3 x 3 grid over the calibrated tariff box."""
    return tau_grid(tariff_box(calibrated), 3, 3)


def test_ev_is_probability_weighted(scenario_set_r25_r150, calibrated_r25, calibrated_r150):
    """EV at zero charges is the mean of the two scenario values."""
    tau = VolumetricCharges()

    expected = 0.5 * (
        solve_equilibrium(calibrated_r25, tau).objective + solve_equilibrium(calibrated_r150, tau).objective
    )

    assert ev_estimate(scenario_set_r25_r150, tau) == pytest.approx(expected, rel=1e-9)


def test_singleton_ev_is_deterministic_value(two_node):
    """With one scenario EV reduces to V."""
    tau = VolumetricCharges(tau_buy=8.0, tau_sell=-3.0)

    assert ev_estimate(ScenarioSet.singleton(two_node), tau) == pytest.approx(
        solve_equilibrium(two_node, tau).objective, rel=1e-9
    )


def test_ev_grid_columns(scenario_set_r25_r150, small_grid):
    """The grid table has one value column per scenario and keeps grid order."""
    table = ev_grid(scenario_set_r25_r150, small_grid, max_workers=2)

    assert list(table.columns) == ["tau_buy", "tau_sell", "EV", "V_r25", "V_r150"]
    assert len(table) == len(small_grid)
    assert table["EV"].to_numpy() == pytest.approx(0.5 * (table["V_r25"] + table["V_r150"]).to_numpy())


def test_zero_charges_maximise_expected_welfare(scenario_set_r25_r150):
    """EV(0, 0) is the best point of the default grid."""
    report = stochastic_optimal_check(scenario_set_r25_r150)

    assert report.passed
    assert report.scenarios == 2
    assert (report.best_tau_buy, report.best_tau_sell) == (0.0, 0.0)


def test_check_reports_origin_on_flat_values(scenario_set_r25_r150):
    """A rounding-level excess elsewhere on the grid still reports the origin as best."""
    grid = [VolumetricCharges(), VolumetricCharges(tau_sell=-40.0), VolumetricCharges(tau_buy=10.0)]
    table = pd.DataFrame({"tau_buy": [0.0, 0.0, 10.0], "tau_sell": [0.0, -40.0, 0.0], "EV": [5e5, 5e5 + 7e-12, 4e5]})

    report = stochastic_optimal_check(scenario_set_r25_r150, grid, table=table)

    assert report.passed
    assert (report.best_tau_buy, report.best_tau_sell) == (0.0, 0.0)
    assert report.best_value == 5e5


def test_check_needs_origin(scenario_set_r25_r150):
    """The check refuses grids without (0, 0)."""
    with pytest.raises(PreconditionError, match="must contain"):
        stochastic_optimal_check(scenario_set_r25_r150, [VolumetricCharges(tau_buy=1.0)])


def test_revenue_probability(scenario_set_r25_r150):
    """Fixed charges covering the target are adequate in every scenario."""
    base = scenario_set_r25_r150.base
    tau = VolumetricCharges()
    households = sum(g.households for g in base.consumers) + sum(g.households for g in base.prosumers)
    flat = base.fixed_cost_target / households
    phi = FixedCharges(
        phi_con={g.node: flat for g in base.consumers},
        phi_pro={g.node: flat for g in base.prosumers},
    )

    assert chance_revenue_probability(scenario_set_r25_r150, tau, phi) == pytest.approx(1.0)
    assert chance_revenue_probability(scenario_set_r25_r150, tau, FixedCharges()) == 0.0


def test_expected_allocation_covers_expected_shortfall(scenario_set_r25_r150):
    """The fixed budget is the target minus expected volumetric revenue."""
    tau = VolumetricCharges(tau_buy=10.0)
    solutions = scenario_solutions(scenario_set_r25_r150, tau)

    allocation = expected_allocation(scenario_set_r25_r150, tau, solutions)

    assert allocation.fixed_budget == pytest.approx(80000.0 - allocation.expected_volumetric_revenue)
    assert allocation.phi.revenue(scenario_set_r25_r150.base) == pytest.approx(allocation.fixed_budget, rel=1e-7)
    assert allocation.gap_B_per_scenario_mean >= 0.0


def test_chance_constrained_search(scenario_set_r25_r150, small_grid):
    """The origin is always admissible, so a best point exists."""
    result = chance_constrained_tariff(scenario_set_r25_r150, small_grid, ChanceSettings(epsilon=0.1))

    assert list(result.table.columns) == list(CHANCE_COLUMNS)
    assert bool(result.table["admissible"].iloc[0])
    assert result.best_index is not None
    assert result.best_tau is not None
    assert 1 <= result.admissible_points <= len(small_grid)
    best = result.table.iloc[result.best_index]
    admissible = result.table[result.table["admissible"]]
    assert best["objective"] == admissible["objective"].max()


def test_failed_scenario_is_reported(monkeypatch, scenario_set_r25_r150):
    """A solver failure names the scenario it happened in."""

    def failing(instance, tau, settings=None):
        if instance.prosumer_at(0).renewable_output == 150.0:
            raise InfeasibleError()
        return solve_equilibrium(instance, tau, settings)

    monkeypatch.setattr(evaluation, "solve_equilibrium", failing)

    with pytest.raises(ScenarioSolveError) as exc_info:
        scenario_solutions(scenario_set_r25_r150, VolumetricCharges())

    assert exc_info.value.details["scenario"] == 1
    assert exc_info.value.details["name"] == "r150"
    assert exc_info.value.details["cause"] == "DS_TARIFF_INFEASIBLE_ERROR"


@pytest.mark.parametrize("epsilon", [0.0, 1.0, -0.2])
def test_chance_settings_validation(epsilon):
    """epsilon must lie strictly between 0 and 1."""
    with pytest.raises(PreconditionError, match="epsilon"):
        ChanceSettings(epsilon=epsilon)


def test_required_probability():
    """Adequacy must hold with probability 1 - epsilon."""
    assert ChanceSettings(epsilon=0.25).required_probability == 0.75
