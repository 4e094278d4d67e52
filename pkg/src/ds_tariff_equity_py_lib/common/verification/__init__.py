"""
**File:** ``__init__.py``
**Region:** ``ds_tariff_equity_py_lib/common/verification``

Description
-----------
Independent checks of the equilibrium solver: active-set enumeration, the
single-node closed form, an empirical convexity probe and seeded instances.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.verification import closed_form_single_node

    d, p, g, rho = closed_form_single_node(100.0, 1000.0, 10.0, 0.05, 100.0)
"""

from .closed_form import SingleNodeClearing, closed_form_single_node
from .convexity import ConvexityReport, convexity_probe
from .generators import hub_ptdf, random_instance, single_node_instance
from .oracle import OracleBudget, enumerate_active_sets

__all__ = [
    "ConvexityReport",
    "OracleBudget",
    "SingleNodeClearing",
    "closed_form_single_node",
    "convexity_probe",
    "enumerate_active_sets",
    "hub_ptdf",
    "random_instance",
    "single_node_instance",
]
