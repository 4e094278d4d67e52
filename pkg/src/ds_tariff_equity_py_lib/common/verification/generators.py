"""
**File:** ``generators.py``
**Region:** ``ds_tariff_equity_py_lib/common/verification``

Description
-----------
Seeded random market instances and the single-node closed-form instance used
by the property suites and the ``verify`` command.

Networks are a single node without lines, two nodes joined by one line, the
three-node triangle with node ``2`` as hub, or a star around the last node
for larger sizes.

Example
-------
.. code-block:: python

    import numpy as np

    from ds_tariff_equity_py_lib.common.verification.generators import random_instance

    instance = random_instance(np.random.default_rng(7), n_nodes=2, n_units=2)
"""

import numpy as np

from ..errors import PreconditionError
from ..market.models import ConsumerGroup, GenUnit, MarketInstance, Network, Node, ProsumerGroup
from ..market.validation import ensure_valid

TRIANGLE_PTDF = (
    (1.0 / 3.0, -1.0 / 3.0, 0.0),
    (1.0 / 3.0, 2.0 / 3.0, 0.0),
    (2.0 / 3.0, 1.0 / 3.0, 0.0),
)


def hub_ptdf(n_nodes: int) -> tuple[tuple[float, ...], ...]:
    """PTDF rows of the default topology for ``n_nodes`` nodes, last node as hub."""
    if n_nodes < 1:
        raise PreconditionError(message="n_nodes must be >= 1", details={"n_nodes": n_nodes})
    if n_nodes == 1:
        return ()
    if n_nodes == 3:
        return TRIANGLE_PTDF
    return tuple(tuple(1.0 if col == row else 0.0 for col in range(n_nodes)) for row in range(n_nodes - 1))


def single_node_instance(
    P0: float,  # noqa: N803
    Q0: float,  # noqa: N803
    a: float,
    A: float,  # noqa: N803
    G: float,  # noqa: N803
    households: float = 1000.0,
    income: float = 100.0,
    fixed_cost_target: float = 0.0,
) -> MarketInstance:
    """Consumer-only node with one unit, matching ``closed_form_single_node``."""
    return ensure_valid(
        MarketInstance(
            nodes=(Node(id=0, demand_vertical_intercept=P0, demand_horizontal_intercept=Q0),),
            consumers=(ConsumerGroup(node=0, households=households, income=income),),
            units=(GenUnit(node=0, id="G1", cost_linear=a, cost_quadratic=A, capacity=G),),
            fixed_cost_target=fixed_cost_target,
        )
    )


def random_instance(
    rng: np.random.Generator,
    n_nodes: int = 2,
    n_units: int = 2,
    with_prosumers: bool = False,
) -> MarketInstance:
    """
    Draw a valid instance.

    Units are placed round-robin over the nodes; prosumers, when requested,
    hold a share of the demand at node ``0``.

    Args:
        rng: Source of randomness.
        n_nodes: Number of nodes.
        n_units: Number of wholesale units, at least one.
        with_prosumers: Whether node ``0`` carries a prosumer group.
    """
    if n_units < 1:
        raise PreconditionError(message="n_units must be >= 1", details={"n_units": n_units})
    ptdf = hub_ptdf(n_nodes)
    nodes = []
    consumers = []
    prosumers = []
    for i in range(n_nodes):
        alpha = float(rng.uniform(0.1, 0.4)) if with_prosumers and i == 0 else 0.0
        nodes.append(
            Node(
                id=i,
                demand_vertical_intercept=float(rng.uniform(50.0, 150.0)),
                demand_horizontal_intercept=float(rng.uniform(50.0, 300.0)),
                prosumer_fraction=alpha,
            )
        )
        consumers.append(
            ConsumerGroup(node=i, households=float(rng.integers(1000, 5000)), income=float(rng.uniform(50.0, 200.0)))
        )
        if alpha > 0:
            prosumers.append(
                ProsumerGroup(
                    node=i,
                    households=float(rng.integers(200, 2000)),
                    income=float(rng.uniform(80.0, 250.0)),
                    renewable_output=float(rng.uniform(0.0, 50.0)),
                    backup_capacity=float(rng.uniform(0.0, 20.0)),
                    backup_cost_linear=float(rng.uniform(10.0, 40.0)),
                    backup_cost_quadratic=float(rng.uniform(0.05, 0.5)),
                    sunk_cost=float(rng.uniform(0.0, 5.0)),
                )
            )
    units = tuple(
        GenUnit(
            node=h % n_nodes,
            id=f"G{h + 1}",
            cost_linear=float(rng.uniform(5.0, 40.0)),
            cost_quadratic=float(rng.uniform(0.01, 0.2)),
            capacity=float(rng.uniform(20.0, 200.0)),
        )
        for h in range(n_units)
    )
    limits = tuple(float(rng.uniform(10.0, 100.0)) for _ in ptdf)
    return ensure_valid(
        MarketInstance(
            nodes=tuple(nodes),
            consumers=tuple(consumers),
            prosumers=tuple(prosumers),
            units=units,
            network=Network(ptdf=ptdf, limits=limits),
            fixed_cost_target=float(rng.uniform(1000.0, 10000.0)),
        )
    )
