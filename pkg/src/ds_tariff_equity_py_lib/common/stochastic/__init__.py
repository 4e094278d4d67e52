"""
**File:** ``__init__.py``
**Region:** ``ds_tariff_equity_py_lib/common/stochastic``

Description
-----------
Finite scenario sets, expected welfare, the revenue chance constraint and the
check that zero volumetric charges stay optimal in expectation.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.stochastic import load_scenarios, stochastic_optimal_check

    scenario_set = load_scenarios("data/scenarios_r25_r150.json", instance)
    assert stochastic_optimal_check(scenario_set).passed
"""

from .evaluation import (
    ChanceConstrainedResult,
    ChanceSettings,
    ExpectedAllocation,
    StochasticCheckReport,
    chance_constrained_tariff,
    chance_revenue_probability,
    ev_estimate,
    ev_grid,
    expected_allocation,
    scenario_solutions,
    stochastic_optimal_check,
)
from .scenarios import Scenario, ScenarioSet, load_scenarios, scenarios_from_dict, scenarios_to_dict

__all__ = [
    "ChanceConstrainedResult",
    "ChanceSettings",
    "ExpectedAllocation",
    "Scenario",
    "ScenarioSet",
    "StochasticCheckReport",
    "chance_constrained_tariff",
    "chance_revenue_probability",
    "ev_estimate",
    "ev_grid",
    "expected_allocation",
    "load_scenarios",
    "scenario_solutions",
    "scenarios_from_dict",
    "scenarios_to_dict",
    "stochastic_optimal_check",
]
