"""
**File:** ``__init__.py``
**Region:** ``ds_tariff_equity_py_lib/common/run``

Description
-----------
Run reports for command-line invocations.
"""

from .config import RunConfig, parse_fractions
from .decorators import RUN_FILE, track_run, write_run_info
from .result import RunError, RunInfo

__all__ = [
    "RUN_FILE",
    "RunConfig",
    "RunError",
    "RunInfo",
    "parse_fractions",
    "track_run",
    "write_run_info",
]
