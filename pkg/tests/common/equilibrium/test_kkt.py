"""
**File:** ``test_kkt.py``
**Region:** ``tests/common/equilibrium``

Description
-----------
Tests for participant optimality residuals.
"""

from dataclasses import replace

import numpy as np
import pytest

from ds_tariff_equity_py_lib.common.equilibrium.charges import VolumetricCharges, tariff_box
from ds_tariff_equity_py_lib.common.equilibrium.kkt import MEASURES, kkt_residuals
from ds_tariff_equity_py_lib.common.equilibrium.solution import solve_equilibrium
from ds_tariff_equity_py_lib.common.verification.generators import random_instance


@pytest.mark.parametrize(
    "tau",
    [
        VolumetricCharges(),
        VolumetricCharges(tau_buy=15.0, tau_sell=-10.0),
        VolumetricCharges(tau_buy=20.0, tau_sell=20.0),
    ],
)
def test_solutions_satisfy_kkt(two_node, tau):
    """Solver output satisfies every participant's optimality system."""
    sol = solve_equilibrium(two_node, tau)

    report = kkt_residuals(two_node, tau, sol)

    assert report.passes(1e-6)


def test_calibrated_solution_satisfies_kkt(calibrated_r150):
    """The three-node study passes the residual check."""
    tau = VolumetricCharges(tau_buy=30.0, tau_sell=-20.0)
    sol = solve_equilibrium(calibrated_r150, tau)

    assert kkt_residuals(calibrated_r150, tau, sol).max_residual <= 1e-6


def test_perturbed_price_is_flagged(single_node):
    """Moving the LMP away from marginal cost shows up as a residual."""
    tau = VolumetricCharges()
    sol = solve_equilibrium(single_node, tau)

    report = kkt_residuals(single_node, tau, replace(sol, p=sol.p + 1.0))

    assert report.consumer.stationarity == pytest.approx(1.0, abs=1e-6)
    assert not report.passes(1e-3)


def test_blocks_without_participants_report_zero(single_node):
    """A market without prosumers has an all-zero prosumer block."""
    sol = solve_equilibrium(single_node, VolumetricCharges())

    assert kkt_residuals(single_node, sol.tau, sol).prosumer.max == 0.0


def test_report_frame(single_node):
    """The report renders as one row per block."""
    sol = solve_equilibrium(single_node, VolumetricCharges())

    frame = kkt_residuals(single_node, sol.tau, sol).to_frame()

    assert list(frame.index) == ["consumer", "prosumer", "iso"]
    assert list(frame.columns) == list(MEASURES)
    assert np.all(frame.to_numpy() <= 1e-6)


def _random_case(index: int):
    """A random market (1-3 nodes, 1-4 units, prosumers on a coin flip) and five charges in its box."""
    rng = np.random.default_rng((123, index))
    instance = random_instance(
        rng,
        n_nodes=int(rng.integers(1, 4)),
        n_units=int(rng.integers(1, 5)),
        with_prosumers=bool(rng.integers(0, 2)),
    )
    box = tariff_box(instance)
    taus = []
    for _ in range(5):
        tau_buy = float(rng.uniform(0.0, box.tau_buy_max))
        taus.append(VolumetricCharges(tau_buy=tau_buy, tau_sell=float(rng.uniform(box.tau_sell_min, tau_buy))))
    return instance, taus


@pytest.mark.parametrize("index", range(50))
def test_random_markets_satisfy_kkt(index):
    """Every random market solves at five charges with residuals below 1e-6."""
    instance, taus = _random_case(index)

    for tau in taus:
        sol = solve_equilibrium(instance, tau)
        assert kkt_residuals(instance, tau, sol).max_residual <= 1e-6, f"tau={tau}"
