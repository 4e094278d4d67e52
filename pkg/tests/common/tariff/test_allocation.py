"""
**File:** ``test_allocation.py``
**Region:** ``tests/common/tariff``

Description
-----------
Tests for the equity-seeking split of a fixed budget.
"""

import numpy as np
import pytest

from ds_tariff_equity_py_lib.common.equilibrium.charges import VolumetricCharges
from ds_tariff_equity_py_lib.common.equilibrium.solution import solve_equilibrium
from ds_tariff_equity_py_lib.common.errors import PreconditionError
from ds_tariff_equity_py_lib.common.market.enums import EquityMeasure, GroupKind
from ds_tariff_equity_py_lib.common.tariff.allocation import (
    allocate_budget,
    allocate_fixed_charges,
    gap_matrix,
    nodal_pairs,
)
from ds_tariff_equity_py_lib.common.tariff.incidence import incidence
from ds_tariff_equity_py_lib.common.tariff.models import FixedCharges


def test_two_groups_equalised():
    """Spends 1 and 1 on incomes 100 and 200 with budget 3 split as 2/3 and 7/3."""
    phi, gap = allocate_budget(
        spends=np.array([1.0, 1.0]),
        incomes=np.array([100.0, 200.0]),
        households=np.array([1.0, 1.0]),
        budget=3.0,
    )

    assert phi == pytest.approx([2.0 / 3.0, 7.0 / 3.0])
    assert gap == pytest.approx(0.0, abs=1e-20)
    assert (1.0 + phi[0]) / 100.0 == pytest.approx(0.016667, rel=1e-4)


def test_unequalisable_budget_goes_to_lowest_incidence():
    """When equal incidence is out of reach the whole budget lands on the lighter group."""
    phi, gap = allocate_budget(
        spends=np.array([10.0, 0.0]),
        incomes=np.array([100.0, 100.0]),
        households=np.array([1.0, 1.0]),
        budget=1.0,
    )

    assert phi == pytest.approx([0.0, 1.0], abs=1e-6)
    assert gap == pytest.approx(2 * 0.045**2, rel=1e-5)


def test_least_norm_among_fair_splits():
    """Under nodal pairs an unpaired group shares the budget at the smallest norm."""
    phi, gap = allocate_budget(
        spends=np.array([1.0, 1.0, 1.0]),
        incomes=np.array([100.0, 100.0, 100.0]),
        households=np.array([1.0, 1.0, 1.0]),
        budget=3.0,
        measure=EquityMeasure.NODAL_PAIRS,
        pairs=[(0, 2)],
    )

    assert phi == pytest.approx([1.0, 1.0, 1.0], abs=1e-6)
    assert gap == pytest.approx(0.0, abs=1e-12)


def test_budget_is_recovered_exactly():
    """Charges always add up to the budget."""
    households = np.array([1200.0, 800.0, 300.0])
    phi, _ = allocate_budget(
        spends=np.array([2.0, 3.5, 6.0]),
        incomes=np.array([150.0, 90.0, 300.0]),
        households=households,
        budget=5000.0,
    )

    assert households @ phi == pytest.approx(5000.0, rel=1e-7)
    assert np.all(phi >= 0.0)


def test_zero_budget_and_errors():
    """A zero budget charges nothing; negative budgets and empty households are rejected."""
    phi, _ = allocate_budget(np.array([1.0]), np.array([10.0]), np.array([5.0]), 0.0)
    assert phi == pytest.approx([0.0])

    with pytest.raises(PreconditionError, match="must be >= 0"):
        allocate_budget(np.array([1.0]), np.array([10.0]), np.array([5.0]), -1.0)
    with pytest.raises(PreconditionError, match="without households"):
        allocate_budget(np.array([1.0]), np.array([10.0]), np.array([0.0]), 1.0)


def test_gap_matrix_reproduces_gap():
    """||W phi + w0||^2 equals the squared deviation of incidences from their mean."""
    spends, incomes, phi = np.array([1.0, 2.0, 4.0]), np.array([50.0, 80.0, 100.0]), np.array([0.5, 0.1, 0.0])
    w, w0 = gap_matrix(spends, incomes)

    incidences = (spends + phi) / incomes
    assert np.sum((w @ phi + w0) ** 2) == pytest.approx(np.sum((incidences - incidences.mean()) ** 2))


def test_nodal_pairs_positions():
    """Consumer and prosumer sharing a node are paired by position."""
    keys = [(GroupKind.CONSUMER, 0), (GroupKind.CONSUMER, 1), (GroupKind.PROSUMER, 0)]

    assert nodal_pairs(keys) == [(0, 2)]


def test_allocate_fixed_charges_on_market(two_node):
    """The fixed budget is raised in full and the split is fairer than a flat charge."""
    tau = VolumetricCharges()
    sol = solve_equilibrium(two_node, tau)

    phi, report = allocate_fixed_charges(two_node, tau, sol, 2000.0)

    assert phi.revenue(two_node) == pytest.approx(2000.0, rel=1e-9)
    assert set(phi.phi_con) == {0, 1}
    assert set(phi.phi_pro) == {0}
    flat = FixedCharges(phi_con={0: 2000.0 / 6000.0, 1: 2000.0 / 6000.0}, phi_pro={0: 2000.0 / 6000.0})
    assert report.gap_B <= incidence(two_node, tau, flat, sol).gap_B
