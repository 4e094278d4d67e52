"""
**File:** ``__init__.py``
**Region:** ``ds_tariff_equity_py_lib/common/equilibrium``

Description
-----------
Lower-level market: welfare program assembly, interior-point solve, dual
price extraction, KKT residuals, surplus decomposition and the welfare value
function.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.equilibrium import VolumetricCharges, kkt_residuals, solve_equilibrium

    sol = solve_equilibrium(instance, VolumetricCharges())
    print(kkt_residuals(instance, sol.tau, sol).max_residual)
"""

from .charges import TariffBox, VolumetricCharges, tariff_box, tau_grid
from .kkt import BlockResiduals, KktReport, kkt_residuals
from .program import QuadraticProgram, VariableLayout, assemble_welfare_program, trade_cap
from .settings import SolverSettings
from .solution import EquilibriumSolution, canonicalize_net_position, extract_solution, solve_equilibrium
from .solver import PrimalDualSolution, solve_equality_kkt, solve_qp, stack_inequalities
from .surplus import SurplusReport, surplus_decomposition
from .value import LaissezFaireReport, laissez_faire_check, select_best, value_function_grid

__all__ = [
    "BlockResiduals",
    "EquilibriumSolution",
    "KktReport",
    "LaissezFaireReport",
    "PrimalDualSolution",
    "QuadraticProgram",
    "SolverSettings",
    "SurplusReport",
    "TariffBox",
    "VariableLayout",
    "VolumetricCharges",
    "assemble_welfare_program",
    "canonicalize_net_position",
    "extract_solution",
    "kkt_residuals",
    "laissez_faire_check",
    "select_best",
    "solve_equality_kkt",
    "solve_equilibrium",
    "solve_qp",
    "stack_inequalities",
    "surplus_decomposition",
    "tariff_box",
    "tau_grid",
    "trade_cap",
    "value_function_grid",
]
