"""
**File:** ``settings.py``
**Region:** ``ds_tariff_equity_py_lib/common/equilibrium``

Description
-----------
Tolerances and limits of the interior-point solver.
"""

from dataclasses import dataclass
from typing import Any

from ds_common_serde_py_lib import Serializable

from ..errors import PreconditionError

CHECK_MARGIN = 1e3


@dataclass(kw_only=True)
class SolverSettings(Serializable):
    """Settings shared by every equilibrium solve."""

    feasibility_tolerance: float = 1e-9
    """Relative bound on primal and dual residuals."""
    complementarity_tolerance: float = 1e-9
    """Absolute bound on the mean slack-multiplier product."""
    duality_gap_tolerance: float = 1e-10
    """Relative bound on the duality gap."""
    max_iterations: int = 200
    regularization: float = 1e-10
    """Diagonal shift of the Newton system."""
    polish: bool = True
    """Re-solve the guessed active set exactly after convergence."""

    def __post_init__(self) -> None:
        for name in ("feasibility_tolerance", "complementarity_tolerance", "duality_gap_tolerance"):
            if not getattr(self, name) > 0:
                raise PreconditionError(message=f"{name} must be > 0", details={name: getattr(self, name)})
        if self.max_iterations < 1:
            raise PreconditionError(
                message="max_iterations must be >= 1", details={"max_iterations": self.max_iterations}
            )
        if self.regularization < 0:
            raise PreconditionError(
                message="regularization must be >= 0", details={"regularization": self.regularization}
            )

    @classmethod
    def from_check_tolerance(cls, tolerance: float, **overrides: Any) -> "SolverSettings":
        """
        Settings that solve ``CHECK_MARGIN`` times tighter than ``tolerance``.

        Results are checked against ``tolerance`` afterwards, so the solver's
        own residual bounds sit well below it. The check tolerance ``1e-6``
        matches the default settings.

        Example:
            >>> settings = SolverSettings.from_check_tolerance(1e-2)
            >>> round(settings.feasibility_tolerance, 12)
            1e-05
        """
        if not tolerance > 0:
            raise PreconditionError(message="tolerance must be > 0", details={"tolerance": tolerance})
        values = {
            "feasibility_tolerance": tolerance / CHECK_MARGIN,
            "complementarity_tolerance": tolerance / CHECK_MARGIN,
            "duality_gap_tolerance": tolerance / (10.0 * CHECK_MARGIN),
        }
        return cls(**{**values, **overrides})
