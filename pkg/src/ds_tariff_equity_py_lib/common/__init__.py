"""
**File:** ``__init__.py``
**Region:** ``ds_tariff_equity_py_lib/common``

Description
-----------
Market model, equilibrium solver, verification tools, tariff design,
stochastic evaluation, serialization and run reporting.
"""

from . import equilibrium, errors, market, run, serde, stochastic, tariff, verification

__all__ = [
    "equilibrium",
    "errors",
    "market",
    "run",
    "serde",
    "stochastic",
    "tariff",
    "verification",
]
