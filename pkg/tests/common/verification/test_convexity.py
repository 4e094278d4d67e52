"""
**File:** ``test_convexity.py``
**Region:** ``tests/common/verification``

Description
-----------
Tests for the empirical convexity probe.
"""

import pandas as pd
import pytest

from ds_tariff_equity_py_lib.common.equilibrium.charges import VolumetricCharges, tariff_box, tau_grid
from ds_tariff_equity_py_lib.common.equilibrium.value import value_function_grid
from ds_tariff_equity_py_lib.common.errors import PreconditionError
from ds_tariff_equity_py_lib.common.verification.convexity import convexity_probe


def test_convex_samples_pass():
    """A parabola along the tau_buy axis has no positive violation."""
    samples = [((x, 0.0), x * x) for x in (0.0, 1.0, 2.0, 3.0)]

    report = convexity_probe(samples)

    assert report.passes(0.0)
    assert report.triples_checked == 4


def test_concave_samples_are_flagged():
    """A concave bump is reported at its middle point."""
    samples = [
        (VolumetricCharges(tau_buy=0.0), 0.0),
        (VolumetricCharges(tau_buy=1.0), 1.0),
        (VolumetricCharges(tau_buy=2.0), 0.0),
    ]

    report = convexity_probe(samples)

    assert report.worst_violation == pytest.approx(1.0)
    assert report.worst_middle == [1.0, 0.0]
    assert not report.passes(1e-6)


def test_frame_input():
    """Frames with tau_buy, tau_sell and V columns are accepted."""
    frame = pd.DataFrame({"tau_buy": [0.0, 1.0, 2.0], "tau_sell": [0.0, -1.0, -2.0], "V": [4.0, 1.0, 0.0]})

    assert convexity_probe(frame).passes(1e-12)


def test_welfare_value_is_convex(two_node):
    """V sampled on a grid over the tariff box is convex."""
    table = value_function_grid(two_node, tau_grid(tariff_box(two_node), n_buy=4, n_sell=4))

    report = convexity_probe(table)

    assert report.passes(1e-6 * (1.0 + table["V"].abs().max()))


@pytest.mark.parametrize(
    "samples",
    [
        [((0.0, 0.0), 0.0), ((1.0, 0.0), 1.0)],
        [((0.0, 0.0), 0.0), ((1.0, 0.0), 1.0), ((0.0, 1.0), 1.0)],
    ],
)
def test_degenerate_samples_are_rejected(samples):
    """Fewer than three points or no collinear triple cannot be probed."""
    with pytest.raises(PreconditionError):
        convexity_probe(samples)
