"""
**File:** ``test_value.py``
**Region:** ``tests/common/equilibrium``

Description
-----------
Tests for the welfare value function and the zero-charge optimality check.
"""

import pytest

from ds_tariff_equity_py_lib.common.equilibrium.charges import VolumetricCharges, tariff_box, tau_grid
from ds_tariff_equity_py_lib.common.equilibrium.value import (
    VALUE_COLUMNS,
    laissez_faire_check,
    select_best,
    value_function_grid,
)
from ds_tariff_equity_py_lib.common.errors import PreconditionError


def test_value_grid_keeps_order(single_node):
    """Rows follow the grid order and V falls with the buy charge."""
    grid = [VolumetricCharges(), VolumetricCharges(tau_buy=10.0), VolumetricCharges(tau_buy=20.0)]

    table = value_function_grid(single_node, grid)

    assert list(table.columns) == list(VALUE_COLUMNS)
    assert list(table["tau_buy"]) == [0.0, 10.0, 20.0]
    assert table["V"].iloc[0] == pytest.approx(27000.0, rel=1e-7)
    assert table["V"].is_monotonic_decreasing


def test_threaded_grid_matches_serial(two_node):
    """Solving on a thread pool gives the same table."""
    grid = tau_grid(tariff_box(two_node), n_buy=3, n_sell=3)

    serial = value_function_grid(two_node, grid)
    threaded = value_function_grid(two_node, grid, max_workers=4)

    assert threaded["V"].to_numpy() == pytest.approx(serial["V"].to_numpy())


def test_zero_charges_maximise_welfare(two_node):
    """V(0, 0) is the largest value on the grid and at the box vertices."""
    report = laissez_faire_check(two_node, tau_grid(tariff_box(two_node), n_buy=4, n_sell=4))

    assert report.passed
    assert report.margin >= -1e-6 * (1.0 + abs(report.value_at_origin))
    assert (report.best_tau_buy, report.best_tau_sell) == (0.0, 0.0)
    assert len(report.extreme_point_values) == 4


def test_calibrated_study_passes(calibrated_r25):
    """The calibrated study with net-buying prosumers passes on a 5 x 5 grid."""
    report = laissez_faire_check(calibrated_r25, tau_grid(tariff_box(calibrated_r25), n_buy=5, n_sell=5))

    assert report.passed


def test_grid_without_origin_is_rejected(single_node):
    """The check needs V(0, 0) on the grid."""
    with pytest.raises(PreconditionError, match="must contain"):
        laissez_faire_check(single_node, [VolumetricCharges(tau_buy=5.0)])


@pytest.mark.parametrize(
    ("values", "origin", "expected"),
    [
        ([100.0, 100.0 + 7e-12, 99.0], 0, 0),
        ([99.0, 100.0 + 7e-12, 100.0], 2, 2),
        ([100.0, 120.0, 120.0 + 1e-9], 0, 1),
        ([100.0, 90.0, 110.0], 0, 2),
    ],
)
def test_select_best_ignores_rounding_noise(values, origin, expected):
    """The origin wins within tolerance; otherwise the first near-maximal point does."""
    assert select_best(values, origin) == expected


@pytest.mark.parametrize("fixture", ["calibrated_r25", "calibrated_r150"])
def test_calibrated_study_peaks_at_origin(request, fixture):
    """On an 11 x 11 grid and the box vertices the study peaks at zero charges."""
    instance = request.getfixturevalue(fixture)

    report = laissez_faire_check(instance, tau_grid(tariff_box(instance), n_buy=11, n_sell=11))

    assert report.passed
    assert (report.best_tau_buy, report.best_tau_sell) == (0.0, 0.0)
    assert report.best_value == report.value_at_origin
    assert max(report.extreme_point_values) <= report.value_at_origin + 1e-6 * (1.0 + abs(report.value_at_origin))
