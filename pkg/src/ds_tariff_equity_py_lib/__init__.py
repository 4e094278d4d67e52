"""
**File:** ``__init__.py``
**Region:** ``ds_tariff_equity_py_lib``

Description
-----------
Wholesale electricity-market equilibria with prosumers and equity-aware
retail tariff design.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib import __version__

    print(f"Package version: {__version__}")
"""

from importlib.metadata import version

from . import common, libs

__version__ = version("ds-tariff-equity-py-lib")

__all__ = [
    "__version__",
    "common",
    "libs",
]
