"""
**File:** ``__init__.py``
**Region:** ``ds_tariff_equity_py_lib/common/serde``

Description
-----------
Serialization of equilibrium solutions and result tables.
"""

from .solution import dumps_solution, loads_solution, solution_from_dict, solution_to_dict
from .tables import TableDeserializer, TableFormat, TableSerializer, write_table

__all__ = [
    "TableDeserializer",
    "TableFormat",
    "TableSerializer",
    "dumps_solution",
    "loads_solution",
    "solution_from_dict",
    "solution_to_dict",
    "write_table",
]
