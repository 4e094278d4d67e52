"""
**File:** ``__init__.py``
**Region:** ``ds_tariff_equity_py_lib/libs/utils``

Description
-----------
Internal shared libraries used by this package (utilities).
"""

from .json_default import json_default

__all__ = ["json_default"]
