"""
**File:** ``result.py``
**Region:** ``ds_tariff_equity_py_lib/common/run``

Description
-----------
Dataclasses capturing the outcome of every command run.
"""

from dataclasses import dataclass, field
from datetime import datetime
from typing import Any

from ds_common_serde_py_lib import Serializable


@dataclass(kw_only=True)
class RunError(Serializable):
    """Structured error captured from a ``TariffEquityException``."""

    message: str
    code: str
    exit_code: int
    """The process exit code the command line maps the error to."""
    details: dict[str, Any] = field(default_factory=dict)


@dataclass(kw_only=True)
class RunInfo(Serializable):
    """
    Report produced by every command.

    Timing fields are populated by the ``track_run`` decorator. Commands set
    ``settings``, ``artifacts`` and ``metadata`` themselves; ``row_count`` is
    derived from the returned table when left at zero.
    """

    command: str | None = None
    success: bool = False
    error: RunError | None = None
    row_count: int = 0
    started_at: datetime | None = None
    ended_at: datetime | None = None
    duration_ms: float = 0.0
    settings: dict[str, Any] = field(default_factory=dict)
    """Effective settings of the run, including solver and search options."""
    artifacts: list[str] = field(default_factory=list)
    """Paths written by the run, in write order."""
    metadata: dict[str, Any] = field(default_factory=dict)
