"""
**File:** ``decorators.py``
**Region:** ``ds_tariff_equity_py_lib/common/run``

Description
-----------
Decorator that times a command, captures its outcome in a ``RunInfo`` and
writes ``run.json`` into the command's output directory.
"""

import functools
import json
from collections.abc import Callable
from datetime import UTC, datetime
from pathlib import Path
from typing import Any

from ds_common_logger_py_lib import Logger

from ...libs.utils.json_default import json_default
from .result import RunError, RunInfo

logger = Logger.get_logger(__name__, package=True)

RUN_FILE = "run.json"


def write_run_info(run: RunInfo, directory: str | Path) -> Path:
    """Write ``run`` as ``run.json`` under ``directory``."""
    path = Path(directory) / RUN_FILE
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(run.serialize(), indent=2, sort_keys=True, default=json_default), encoding="utf-8")
    return path


def track_run(fn: Callable[..., Any]) -> Callable[..., Any]:
    """
    Wrap a command body ``fn(run, out_dir, ...)`` so ``run`` is initialised
    before the call and enriched afterwards.

    **Auto-populated fields:**

    - ``command`` -- the function name without its ``cmd_`` prefix.
    - ``success`` -- ``True`` when the body returns without raising.
    - ``error`` -- structured ``RunError`` on failure; exit code 1 for
      exceptions that carry none.
    - ``started_at`` / ``ended_at`` / ``duration_ms`` -- wall-clock timing.
    - ``row_count`` -- ``len`` of the returned value when the body leaves
      the default (``0``).

    ``run.json`` is written to ``out_dir`` on success and on failure. The
    returned wrapper takes ``out_dir`` and the remaining arguments and
    returns ``(result, run)``.
    """

    @functools.wraps(fn)
    def wrapper(out_dir: str | Path, *args: Any, **kwargs: Any) -> tuple[Any, RunInfo]:
        run = RunInfo(command=fn.__name__.removeprefix("cmd_"))
        run.started_at = datetime.now(tz=UTC)
        try:
            result = fn(run, out_dir, *args, **kwargs)
            run.success = True
            if run.row_count == 0 and hasattr(result, "__len__"):
                run.row_count = len(result)
            return result, run
        except Exception as exc:
            run.success = False
            run.error = RunError(
                message=getattr(exc, "message", str(exc)),
                code=getattr(exc, "code", type(exc).__name__),
                exit_code=getattr(exc, "exit_code", 1),
                details=getattr(exc, "details", {}),
            )
            raise
        finally:
            run.ended_at = datetime.now(tz=UTC)
            delta = run.ended_at - run.started_at
            run.duration_ms = round(delta.total_seconds() * 1000, 3)
            try:
                path = write_run_info(run, out_dir)
                logger.debug(f"Run report written to {path}")
            except OSError as exc:
                logger.warning(f"Could not write {RUN_FILE} to {out_dir}: {exc}")

    wrapper._tracked = True  # type: ignore[attr-defined]
    return wrapper
