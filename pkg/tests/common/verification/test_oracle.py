"""
**File:** ``test_oracle.py``
**Region:** ``tests/common/verification``

Description
-----------
Tests for the brute-force active-set oracle.
"""

import numpy as np
import pytest

from ds_tariff_equity_py_lib.common.equilibrium.charges import VolumetricCharges
from ds_tariff_equity_py_lib.common.equilibrium.solution import solve_equilibrium
from ds_tariff_equity_py_lib.common.errors import OracleBudgetError, PreconditionError
from ds_tariff_equity_py_lib.common.verification.generators import random_instance
from ds_tariff_equity_py_lib.common.verification.oracle import OracleBudget, enumerate_active_sets


def test_oracle_matches_single_node(single_node):
    """The oracle finds d = 600 at p = 40."""
    sol = enumerate_active_sets(single_node, VolumetricCharges())

    assert sol.d == pytest.approx([600.0])
    assert sol.p == pytest.approx([40.0])
    assert sol.polished


@pytest.mark.parametrize("seed", range(20))
def test_oracle_agrees_with_solver(seed):
    """On random two-node instances, half with prosumers, solver and oracle agree on objective and primal point."""
    instance = random_instance(np.random.default_rng(seed), n_nodes=2, n_units=2, with_prosumers=seed % 2 == 0)
    tau = VolumetricCharges(tau_buy=5.0, tau_sell=-2.0)

    expected = enumerate_active_sets(instance, tau)
    sol = solve_equilibrium(instance, tau)

    assert sol.objective == pytest.approx(expected.objective, rel=1e-6, abs=1e-6)
    assert sol.d == pytest.approx(expected.d, rel=1e-5, abs=1e-5)
    assert sol.g_units == pytest.approx(expected.g_units, rel=1e-5, abs=1e-5)


def test_budget_is_enforced(two_node):
    """Instances with more inequalities than the budget allows are refused."""
    with pytest.raises(OracleBudgetError):
        enumerate_active_sets(two_node, VolumetricCharges(), OracleBudget(max_inequalities=4))


@pytest.mark.parametrize(("field", "value"), [("max_inequalities", 26), ("max_inequalities", -1), ("tolerance", 0.0)])
def test_budget_validation(field, value):
    """Budgets outside the supported range are rejected."""
    with pytest.raises(PreconditionError):
        OracleBudget(**{field: value})
