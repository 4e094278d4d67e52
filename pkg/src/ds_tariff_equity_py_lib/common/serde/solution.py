"""
**File:** ``solution.py``
**Region:** ``ds_tariff_equity_py_lib/common/serde``

Description
-----------
JSON codec for equilibrium solutions.

Arrays are written as lists of Python floats, whose shortest repr reloads to
the same double, so a decoded solution has exactly the residuals of the
original.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.serde.solution import dumps_solution, loads_solution

    text = dumps_solution(sol)
    assert loads_solution(text).objective == sol.objective
"""

import json
from collections.abc import Mapping
from typing import Any

import numpy as np
from ds_common_serde_py_lib.errors import DeserializationError, SerializationError

from ...libs.utils.json_default import json_default
from ..equilibrium.charges import VolumetricCharges
from ..equilibrium.solution import EquilibriumSolution

ARRAY_FIELDS = (
    "d",
    "l",
    "z_sell",
    "z_buy",
    "g_backup",
    "g_units",
    "y",
    "p",
    "delta",
    "kappa",
    "rho",
    "lambda_plus",
    "lambda_minus",
)
NODE_FIELDS = ("d", "l", "z_sell", "z_buy", "g_backup", "y", "delta", "kappa")
FLOAT_FIELDS = ("theta", "objective")
INT_FIELDS = ("iterations", "constraint_rank", "active_constraints")
BOOL_FIELDS = ("polished", "degenerate_prices")


def solution_to_dict(sol: EquilibriumSolution) -> dict[str, Any]:
    """
    Plain-data form of ``sol``.

    Raises:
        SerializationError: If a field cannot be converted.
    """
    try:
        data: dict[str, Any] = {"tau": {"tau_buy": float(sol.tau.tau_buy), "tau_sell": float(sol.tau.tau_sell)}}
        data.update({name: [float(v) for v in np.asarray(getattr(sol, name), dtype=float)] for name in ARRAY_FIELDS})
        data.update({name: float(getattr(sol, name)) for name in FLOAT_FIELDS})
        data.update({name: int(getattr(sol, name)) for name in INT_FIELDS})
        data.update({name: bool(getattr(sol, name)) for name in BOOL_FIELDS})
        data["extras"] = {str(k): float(v) for k, v in sol.extras.items()}
        return data
    except Exception as exc:
        raise SerializationError(
            message=f"Failed to serialize equilibrium solution: {exc}", details={"error": str(exc)}
        ) from exc


def solution_from_dict(data: Mapping[str, Any]) -> EquilibriumSolution:
    """
    Rebuild a solution from ``solution_to_dict`` output.

    Raises:
        DeserializationError: If a field is missing or malformed.
    """
    try:
        missing = [name for name in ("tau", *ARRAY_FIELDS, *FLOAT_FIELDS) if name not in data]
        if missing:
            raise DeserializationError(message=f"Solution is missing field(s) {missing}", details={"missing": missing})
        tau = data["tau"]
        arrays = {name: np.asarray(data[name], dtype=float).reshape(-1) for name in ARRAY_FIELDS}
        n = arrays["p"].shape[0]
        ragged = [name for name in NODE_FIELDS if arrays[name].shape[0] != n]
        if arrays["rho"].shape != arrays["g_units"].shape:
            ragged.append("rho")
        if arrays["lambda_plus"].shape != arrays["lambda_minus"].shape:
            ragged.append("lambda_minus")
        if ragged:
            raise DeserializationError(
                message="Solution arrays have inconsistent lengths", details={"ragged": ragged, "nodes": n}
            )
        return EquilibriumSolution(
            tau=VolumetricCharges(tau_buy=float(tau["tau_buy"]), tau_sell=float(tau["tau_sell"])),
            **arrays,
            theta=float(data["theta"]),
            objective=float(data["objective"]),
            iterations=int(data.get("iterations", 0)),
            polished=bool(data.get("polished", False)),
            constraint_rank=int(data.get("constraint_rank", 0)),
            active_constraints=int(data.get("active_constraints", 0)),
            degenerate_prices=bool(data.get("degenerate_prices", False)),
            extras={str(k): float(v) for k, v in dict(data.get("extras", {})).items()},
        )
    except DeserializationError:
        raise
    except Exception as exc:
        raise DeserializationError(
            message=f"Failed to deserialize equilibrium solution: {exc}", details={"error": str(exc)}
        ) from exc


def dumps_solution(sol: EquilibriumSolution, indent: int | None = 2) -> str:
    return json.dumps(solution_to_dict(sol), indent=indent, default=json_default)


def loads_solution(text: str | bytes) -> EquilibriumSolution:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DeserializationError(message=f"Solution is not valid JSON: {exc}", details={"error": str(exc)}) from exc
    return solution_from_dict(data)
