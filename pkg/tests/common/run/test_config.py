"""
**File:** ``test_config.py``
**Region:** ``tests/common/run``

Description
-----------
Tests for run parameters and fraction grid parsing.
"""

import pytest

from ds_tariff_equity_py_lib.common.errors import ConfigError
from ds_tariff_equity_py_lib.common.run.config import RunConfig, parse_fractions
from ds_tariff_equity_py_lib.common.serde.tables import TableFormat


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("0:0.3:0.1", [0.0, 0.1, 0.2, 0.3]),
        ("0:1:0.25", [0.0, 0.25, 0.5, 0.75, 1.0]),
        ("0.5", [0.5]),
        ("0.2:0.2:0.1", [0.2]),
        ("0:0.25:0.1", [0.0, 0.1, 0.2]),
    ],
)
def test_parse_fractions(text, expected):
    """Grids include both ends when the step lands on STOP."""
    assert parse_fractions(text) == expected


@pytest.mark.parametrize(
    ("text", "match"),
    [
        ("abc", "cannot parse"),
        ("0:1", "expected START:STOP:STEP"),
        ("1:0:0.1", "STEP > 0"),
        ("0:1:0", "STEP > 0"),
        ("0:1.5:0.5", "outside"),
        ("-0.1", "outside"),
    ],
)
def test_parse_fractions_errors(text, match):
    """Malformed grids raise ConfigError."""
    with pytest.raises(ConfigError, match=match):
        parse_fractions(text)


def test_run_config_defaults(temp_dir):
    """Defaults cover a run with an existing instance document."""
    path = temp_dir / "market.json"
    path.write_text("{}")

    config = RunConfig(command="solve", config=str(path), format="json")

    assert config.format is TableFormat.JSON
    assert config.fractions == [0.0]
    assert config.epsilon == 0.1


@pytest.mark.parametrize(
    ("kwargs", "match"),
    [
        ({"config": "missing.json"}, "does not exist"),
        ({"scenarios": "missing.yaml"}, "does not exist"),
        ({"tol": 0.0}, "--tol must be > 0"),
        ({"fractions": []}, "empty grid"),
    ],
)
def test_run_config_errors(kwargs, match):
    """Invalid parameters raise ConfigError."""
    with pytest.raises(ConfigError, match=match):
        RunConfig(command="sweep", **kwargs)
