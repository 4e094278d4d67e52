"""
**File:** ``test_decorators.py``
**Region:** ``tests/common/run``

Description
-----------
Cover ``RunInfo`` auto-population and ``track_run`` decorator behaviour.
"""

import json

import pandas as pd
import pytest

from ds_tariff_equity_py_lib.common.errors import ValidationError
from ds_tariff_equity_py_lib.common.run.decorators import RUN_FILE, track_run, write_run_info
from ds_tariff_equity_py_lib.common.run.result import RunInfo


@track_run
def cmd_table(run, out_dir, rows):
    run.settings["rows"] = rows
    return pd.DataFrame({"x": range(rows)})


@track_run
def cmd_counted(run, out_dir):
    run.row_count = 7
    return [1, 2]


@track_run
def cmd_invalid(run, out_dir):
    raise ValidationError(message="Invalid market instance: bad", details={"violations": ["bad"]})


@track_run
def cmd_broken(run, out_dir):
    raise RuntimeError("boom")


class TestTrackRun:
    """Validate the run report written around a command body."""

    def test_success_populates_run(self, temp_dir):
        """Name, success, timing and row count are filled in."""
        result, run = cmd_table(temp_dir, 3)

        assert len(result) == 3
        assert run.command == "table"
        assert run.success is True
        assert run.error is None
        assert run.row_count == 3
        assert run.started_at is not None
        assert run.ended_at >= run.started_at
        assert run.duration_ms >= 0.0

    def test_run_file_written(self, temp_dir):
        """run.json holds the settings recorded by the body."""
        cmd_table(temp_dir / "nested", 2)

        data = json.loads((temp_dir / "nested" / RUN_FILE).read_text(encoding="utf-8"))

        assert data["command"] == "table"
        assert data["success"] is True
        assert data["settings"] == {"rows": 2}

    def test_explicit_row_count_is_kept(self, temp_dir):
        """A body that sets row_count is not overwritten."""
        _, run = cmd_counted(temp_dir)

        assert run.row_count == 7

    def test_library_error_is_captured(self, temp_dir):
        """Structured errors keep their code, exit code and details."""
        with pytest.raises(ValidationError):
            cmd_invalid(temp_dir)

        data = json.loads((temp_dir / RUN_FILE).read_text(encoding="utf-8"))
        assert data["success"] is False
        assert data["error"]["code"] == "DS_TARIFF_VALIDATION_ERROR"
        assert data["error"]["exit_code"] == 2
        assert data["error"]["details"] == {"violations": ["bad"]}

    def test_foreign_error_defaults(self, temp_dir):
        """Other exceptions are reported with exit code 1."""
        with pytest.raises(RuntimeError, match="boom"):
            cmd_broken(temp_dir)

        data = json.loads((temp_dir / RUN_FILE).read_text(encoding="utf-8"))
        assert data["error"]["code"] == "RuntimeError"
        assert data["error"]["message"] == "boom"
        assert data["error"]["exit_code"] == 1

    def test_unwritable_directory_is_logged(self, temp_dir):
        """A failing report write does not hide the command result."""
        blocker = temp_dir / "file"
        blocker.write_text("")

        result, run = cmd_table(blocker, 1)

        assert run.success is True
        assert len(result) == 1


def test_write_run_info(temp_dir):
    """The report is written sorted and indented."""
    path = write_run_info(RunInfo(command="verify", artifacts=["out/kkt.csv"]), temp_dir)

    assert path.name == RUN_FILE
    assert json.loads(path.read_text(encoding="utf-8"))["artifacts"] == ["out/kkt.csv"]
