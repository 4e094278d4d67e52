"""
**File:** ``json_default.py``
**Region:** ``ds_tariff_equity_py_lib/libs/utils``

Description
-----------
JSON serialization helpers for values that are not natively JSON-encodable:
numpy scalars and arrays, enums, timestamps and paths.

Example
-------
.. code-block:: python

    import json

    import numpy as np

    from ds_tariff_equity_py_lib.libs.utils.json_default import json_default

    payload = json.dumps({"p": np.array([30.0, 42.5]), "iterations": np.int64(14)}, default=json_default)
"""

from __future__ import annotations

from datetime import date, datetime, time
from enum import Enum
from pathlib import PurePath
from typing import Any


def json_default(value: Any) -> Any:
    """
    ``default`` callback for :func:`json.dumps`.

    Arrays and other objects with a callable ``.tolist()`` become lists;
    scalar-like objects with a callable ``.item()`` (numpy scalars) are
    unwrapped before encoding. Unknown types raise :class:`TypeError`,
    matching stdlib behavior.
    """
    if isinstance(value, (datetime, date, time)):
        return value.isoformat()

    if isinstance(value, Enum):
        return value.value

    if isinstance(value, PurePath):
        return str(value)

    if isinstance(value, (set, frozenset)):
        return sorted(value)

    tolist = getattr(value, "tolist", None)
    if callable(tolist) and getattr(value, "ndim", 0) > 0:
        return tolist()

    item = getattr(value, "item", None)
    if callable(item):
        native = item()
        try:
            return json_default(native)
        except TypeError:
            return native

    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")
