"""
**File:** ``test_closed_form.py``
**Region:** ``tests/common/verification``

Description
-----------
Tests for the closed-form single-node clearing and its agreement with the solver.
"""

import pytest

from ds_tariff_equity_py_lib.common.equilibrium.charges import VolumetricCharges
from ds_tariff_equity_py_lib.common.equilibrium.solution import solve_equilibrium
from ds_tariff_equity_py_lib.common.verification.closed_form import closed_form_single_node
from ds_tariff_equity_py_lib.common.verification.generators import single_node_instance


def test_reference_point():
    """P0 = 100, Q0 = 1000, a = 10, A = 0.05, G = 1000 gives d = 600, p = 40."""
    clearing = closed_form_single_node(100.0, 1000.0, 10.0, 0.05, 1000.0)

    assert clearing.d == pytest.approx(600.0)
    assert clearing.p == pytest.approx(40.0)
    assert clearing.rho == 0.0


def test_capacity_binds():
    """With G = 300 the price comes off the demand curve and the unit earns a rent."""
    clearing = closed_form_single_node(100.0, 1000.0, 10.0, 0.05, 300.0)

    assert clearing.d == 300.0
    assert clearing.p == pytest.approx(70.0)
    assert clearing.rho == pytest.approx(45.0)


def test_no_trade_reports_marginal_cost():
    """When P0 does not exceed a + tau_b nothing clears and p = a."""
    clearing = closed_form_single_node(100.0, 1000.0, 60.0, 0.05, 1000.0, tau_b=50.0)

    assert (clearing.d, clearing.p, clearing.g) == (0.0, 60.0, 0.0)


@pytest.mark.parametrize(
    ("P0", "Q0", "a", "A", "G", "tau_b"),
    [
        (100.0, 1000.0, 10.0, 0.05, 1000.0, 0.0),
        (100.0, 1000.0, 10.0, 0.05, 1000.0, 15.0),
        (100.0, 1000.0, 10.0, 0.05, 300.0, 0.0),
        (250.0, 400.0, 30.0, 0.2, 500.0, 40.0),
    ],
)
def test_solver_matches_closed_form(P0, Q0, a, A, G, tau_b):  # noqa: N803
    """The interior-point solution agrees with the closed form to 1e-6 relative."""
    expected = closed_form_single_node(P0, Q0, a, A, G, tau_b=tau_b)

    sol = solve_equilibrium(single_node_instance(P0, Q0, a, A, G), VolumetricCharges(tau_buy=tau_b))

    assert sol.d[0] == pytest.approx(expected.d, rel=1e-6)
    assert sol.p[0] == pytest.approx(expected.p, rel=1e-6)
    assert sol.rho[0] == pytest.approx(expected.rho, rel=1e-6, abs=1e-6)
