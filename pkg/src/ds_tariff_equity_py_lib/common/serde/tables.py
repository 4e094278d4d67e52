"""
**File:** ``tables.py``
**Region:** ``ds_tariff_equity_py_lib/common/serde``

Description
-----------
Serialize result tables (sweeps, value grids, summaries) to CSV or JSON
records and read them back.

CSV floats use nine significant digits with a ``.`` decimal separator, so
repeated runs on the same input produce identical bytes.

Example
-------
.. code-block:: python

    import pandas as pd

    from ds_tariff_equity_py_lib.common.serde.tables import TableFormat, TableSerializer

    df = pd.DataFrame({"fraction": [0.0, 0.1], "total_surplus": [893.08, 893.07]})
    csv_text = TableSerializer(format=TableFormat.CSV)(df)
"""

import io
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path
from typing import Any

import pandas as pd
from ds_common_logger_py_lib import Logger
from ds_common_serde_py_lib import Serializable
from ds_common_serde_py_lib.errors import DeserializationError, SerializationError

logger = Logger.get_logger(__name__, package=True)

CSV_FLOAT_FORMAT = "%.9g"


class TableFormat(StrEnum):
    CSV = "csv"
    JSON = "json"

    @property
    def suffix(self) -> str:
        return f".{self.value}"


@dataclass(kw_only=True)
class TableSerializer(Serializable):
    format: TableFormat = TableFormat.CSV
    kwargs: dict[str, Any] = field(default_factory=dict)

    def __call__(self, obj: Any) -> str:
        """
        Serialize a DataFrame to text.

        Raises:
            SerializationError: If ``obj`` is not a DataFrame or encoding fails.
        """
        logger.debug(f"TableSerializer __call__ with format: {self.format} and args: {self.kwargs}")
        try:
            if not isinstance(obj, pd.DataFrame):
                raise SerializationError(
                    message=f"Expected pd.DataFrame, got {type(obj)}",
                    details={"format": str(self.format), "type": type(obj).__name__},
                )
            if self.format == TableFormat.CSV:
                options = {"index": False, "float_format": CSV_FLOAT_FORMAT, "lineterminator": "\n", **self.kwargs}
                return str(obj.to_csv(**options))
            if self.format == TableFormat.JSON:
                options = {"orient": "records", "double_precision": 15, "indent": 2, **self.kwargs}
                return str(obj.to_json(**options))
            raise SerializationError(message=f"Unsupported format: {self.format}", details={"format": str(self.format)})
        except SerializationError:
            raise
        except Exception as exc:
            raise SerializationError(
                message=f"Failed to serialize {self.format} table: {exc}",
                details={"format": str(self.format), "error": str(exc)},
            ) from exc


@dataclass(kw_only=True)
class TableDeserializer(Serializable):
    format: TableFormat = TableFormat.CSV
    kwargs: dict[str, Any] = field(default_factory=dict)

    def __call__(self, value: str | bytes) -> pd.DataFrame:
        """
        Read a table written by ``TableSerializer``.

        Raises:
            DeserializationError: If the text cannot be parsed.
        """
        logger.debug(f"TableDeserializer __call__ with format: {self.format} and args: {self.kwargs}")
        try:
            buffer = io.BytesIO(value) if isinstance(value, bytes) else io.StringIO(value)
            if self.format == TableFormat.CSV:
                return pd.read_csv(buffer, **self.kwargs)
            if self.format == TableFormat.JSON:
                return pd.read_json(buffer, **{"orient": "records", **self.kwargs})
            raise DeserializationError(
                message=f"Unsupported format: {self.format}", details={"format": str(self.format)}
            )
        except DeserializationError:
            raise
        except Exception as exc:
            raise DeserializationError(
                message=f"Failed to deserialize {self.format} table: {exc}",
                details={"format": str(self.format), "error": str(exc)},
            ) from exc


def write_table(
    df: pd.DataFrame, directory: str | Path, stem: str, table_format: TableFormat = TableFormat.CSV
) -> Path:
    """Write ``df`` as ``<directory>/<stem>.<format>`` and return the path."""
    path = Path(directory) / f"{stem}{table_format.suffix}"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(TableSerializer(format=table_format)(df), encoding="utf-8")
    logger.info(f"Wrote {len(df)} row(s) to {path}")
    return path
