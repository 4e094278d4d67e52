"""
**File:** ``test_json_default.py``
**Region:** ``tests/libs/utils``

Description
-----------
Tests for JSON serialization helpers in ``json_default``.
"""

import json
from datetime import UTC, date, datetime, time
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
import pytest

from ds_tariff_equity_py_lib.common.market.enums import EquityMeasure, GroupKind
from ds_tariff_equity_py_lib.common.serde.tables import TableFormat
from ds_tariff_equity_py_lib.libs.utils.json_default import json_default


class _FakeScalarWithItem:
    def __init__(self, value: Any) -> None:
        self._value = value

    def item(self) -> Any:
        return self._value


def test_json_default_datetime():
    """Serialize datetime values as ISO-8601 strings."""
    value = datetime(2026, 3, 15, 10, 30, 0, tzinfo=UTC)

    assert json_default(value) == "2026-03-15T10:30:00+00:00"


def test_json_default_date_and_time():
    """Serialize date and time values as ISO-8601 strings."""
    assert json_default(date(2026, 3, 15)) == "2026-03-15"
    assert json_default(time(10, 30, 0)) == "10:30:00"


@pytest.mark.parametrize(
    ("value", "expected"),
    [
        (GroupKind.PROSUMER, "pro"),
        (EquityMeasure.NODAL_PAIRS, "nodal_pairs"),
        (TableFormat.JSON, "json"),
    ],
)
def test_json_default_enums(value, expected):
    """Enums serialize as their values."""
    assert json_default(value) == expected


def test_json_default_path_and_set():
    """Paths become strings and sets become sorted lists."""
    assert json_default(Path("out") / "run.json") == str(Path("out") / "run.json")
    assert json_default({3, 1, 2}) == [1, 2, 3]


def test_json_default_numpy_arrays():
    """Arrays become nested lists of native numbers."""
    payload = {"p": np.array([30.0, 42.5]), "ptdf": np.eye(2)}

    result = json.loads(json.dumps(payload, default=json_default))

    assert result == {"p": [30.0, 42.5], "ptdf": [[1.0, 0.0], [0.0, 1.0]]}


def test_json_default_numpy_scalars():
    """Numpy scalar types serialize via the .item() branch."""
    assert json.dumps(np.int64(42), default=json_default) == "42"
    assert json.dumps(np.float64(3.5), default=json_default) == "3.5"
    assert json.dumps(np.bool_(True), default=json_default) == "true"


def test_json_default_zero_dimensional_array():
    """A 0-d array is unwrapped like a scalar."""
    assert json.dumps(np.array(2.5), default=json_default) == "2.5"


def test_json_default_numpy_datetime64():
    """Numpy datetime64 values serialize as ISO-8601 strings."""
    value = np.datetime64("2026-03-15T10:30")

    assert json.loads(json.dumps(value, default=json_default)) == "2026-03-15T10:30:00"


def test_json_default_pandas_timestamp():
    """Pandas Timestamp values serialize as ISO-8601 strings."""
    value = pd.Timestamp("2026-03-15 10:30:00")

    assert json.loads(json.dumps(value, default=json_default)) == "2026-03-15T10:30:00"


def test_json_default_uses_item_for_objects_with_callable_item():
    """Objects with a callable .item() unwrap to JSON-native values."""
    assert json.dumps(_FakeScalarWithItem(7), default=json_default) == "7"


def test_json_default_bytes_raises_type_error():
    """Bytes must not be silently decoded to text."""
    with pytest.raises(TypeError, match="not JSON serializable"):
        json_default(b"hello")


def test_json_default_unknown_type_raises_type_error():
    """Unknown types raise TypeError like stdlib json.dumps."""
    with pytest.raises(TypeError, match="not JSON serializable"):
        json_default(object())


def test_json_dumps_run_like_payload():
    """A nested report with mixed leaves round-trips through json."""
    payload = {
        "settings": {"fractions": np.linspace(0.0, 0.2, 3), "measure": EquityMeasure.ALL_GROUPS},
        "artifacts": [Path("out/sweep.csv")],
        "started_at": datetime(2026, 3, 15, tzinfo=UTC),
    }

    result = json.loads(json.dumps(payload, default=json_default))

    assert result["settings"] == {"fractions": [0.0, 0.1, 0.2], "measure": "all_groups"}
    assert result["artifacts"] == [str(Path("out/sweep.csv"))]
    assert result["started_at"] == "2026-03-15T00:00:00+00:00"
