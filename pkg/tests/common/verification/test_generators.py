"""
**File:** ``test_generators.py``
**Region:** ``tests/common/verification``

Description
-----------
Tests for the instance generators used in verification.
"""

import numpy as np
import pytest

from ds_tariff_equity_py_lib.common.errors import PreconditionError
from ds_tariff_equity_py_lib.common.market.validation import validate
from ds_tariff_equity_py_lib.common.verification.generators import hub_ptdf, random_instance, single_node_instance


@pytest.mark.parametrize(("n_nodes", "rows"), [(1, 0), (2, 1), (3, 3), (5, 4)])
def test_hub_ptdf_shape(n_nodes, rows):
    """One row per line, one column per node."""
    ptdf = hub_ptdf(n_nodes)

    assert len(ptdf) == rows
    assert all(len(row) == n_nodes for row in ptdf)


def test_hub_ptdf_rejects_empty_network():
    """At least one node is needed."""
    with pytest.raises(PreconditionError):
        hub_ptdf(0)


@pytest.mark.parametrize("with_prosumers", [False, True])
def test_random_instances_are_valid(with_prosumers):
    """Every draw passes validation."""
    rng = np.random.default_rng(7)

    for _ in range(5):
        instance = random_instance(rng, n_nodes=3, n_units=4, with_prosumers=with_prosumers)
        assert validate(instance).is_valid
        assert bool(instance.prosumers) is with_prosumers


def test_random_instance_is_reproducible():
    """The same seed draws the same instance."""
    first = random_instance(np.random.default_rng(11))
    second = random_instance(np.random.default_rng(11))

    assert first == second


def test_single_node_instance():
    """The single-node builder carries the given parameters."""
    instance = single_node_instance(100.0, 1000.0, 10.0, 0.05, 1000.0, fixed_cost_target=50.0)

    assert instance.nodes[0].demand_vertical_intercept == 100.0
    assert instance.units[0].capacity == 1000.0
    assert instance.fixed_cost_target == 50.0
