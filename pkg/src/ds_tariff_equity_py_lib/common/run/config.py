"""
**File:** ``config.py``
**Region:** ``ds_tariff_equity_py_lib/common/run``

Description
-----------
Parameters of one command-line run and the parser for fraction grids.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.run.config import parse_fractions

    parse_fractions("0:0.3:0.1")  # [0.0, 0.1, 0.2, 0.3]
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from ds_common_serde_py_lib import Serializable

from ..errors import ConfigError
from ..serde.tables import TableFormat

GRID_DECIMALS = 12


def parse_fractions(text: str) -> list[float]:
    """
    Expand ``START:STOP:STEP`` into an inclusive grid, or read a single value.

    Raises:
        ConfigError: If the grid is malformed, empty or leaves ``[0, 1]``.
    """
    parts = text.split(":")
    try:
        values = [float(part) for part in parts]
    except ValueError as exc:
        raise ConfigError(message=f"--fractions: cannot parse {text!r}", details={"fractions": text}) from exc
    if len(values) == 1:
        grid = values
    elif len(values) == 3:
        start, stop, step = values
        if step <= 0 or stop < start:
            raise ConfigError(
                message=f"--fractions: need STEP > 0 and STOP >= START, got {text!r}", details={"fractions": text}
            )
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        grid = [float(v) for v in np.round(start + step * np.arange(count), GRID_DECIMALS)]
    else:
        raise ConfigError(message=f"--fractions: expected START:STOP:STEP, got {text!r}", details={"fractions": text})
    outside = [v for v in grid if not 0.0 <= v <= 1.0]
    if outside:
        raise ConfigError(message=f"--fractions: values {outside} lie outside [0, 1]", details={"fractions": text})
    return grid


@dataclass(kw_only=True)
class RunConfig(Serializable):
    """Everything a command needs besides the instance itself."""

    command: str
    config: str | None = None
    """Instance or calibration document."""
    tau_buy: float = 0.0
    tau_sell: float = 0.0
    fractions: list[float] = field(default_factory=lambda: [0.0])
    scenarios: str | None = None
    epsilon: float = 0.1
    out: str = "out"
    format: TableFormat = TableFormat.CSV
    seed: int | None = None
    tol: float = 1e-6
    max_workers: int | None = None

    def __post_init__(self) -> None:
        for name in ("config", "scenarios"):
            value = getattr(self, name)
            if value is not None and not Path(value).is_file():
                raise ConfigError(message=f"--{name}: {value} does not exist", details={"path": value})
        if not self.tol > 0:
            raise ConfigError(message=f"--tol must be > 0, got {self.tol}", details={"tol": self.tol})
        if not self.fractions:
            raise ConfigError(message="--fractions produced an empty grid")
        self.format = TableFormat(self.format)
