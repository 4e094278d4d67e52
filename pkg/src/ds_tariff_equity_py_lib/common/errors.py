"""
**File:** ``errors.py``
**Region:** ``ds_tariff_equity_py_lib/common``

Description
-----------
Exceptions for market, equilibrium, tariff and scenario operations.

Every exception carries a stable ``code``, the process ``exit_code`` the
command line maps it to, and a ``details`` dictionary. Configuration problems
exit with ``2``; numerical failures exit with ``3``.
"""

from typing import Any

EXIT_CONFIG = 2
EXIT_SOLVER = 3


class TariffEquityException(Exception):
    """Base exception for all tariff-equity errors."""

    def __init__(
        self,
        message: str = "Tariff equity operation failed",
        code: str = "DS_TARIFF_ERROR",
        exit_code: int = 1,
        details: dict[str, Any] | None = None,
    ) -> None:
        self.code = code
        self.exit_code = exit_code
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


class ConfigError(TariffEquityException):
    """Raised when a document cannot be read or does not match its schema."""

    def __init__(
        self,
        message: str = "Invalid configuration",
        code: str = "DS_TARIFF_CONFIG_ERROR",
        exit_code: int = EXIT_CONFIG,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, code, exit_code, details)


class ValidationError(TariffEquityException):
    """Raised when a market instance violates its invariants."""

    def __init__(
        self,
        message: str = "Validation failed",
        code: str = "DS_TARIFF_VALIDATION_ERROR",
        exit_code: int = EXIT_CONFIG,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, code, exit_code, details)


class CalibrationError(TariffEquityException):
    """Raised when a calibration document cannot anchor a demand curve."""

    def __init__(
        self,
        message: str = "Calibration failed",
        code: str = "DS_TARIFF_CALIBRATION_ERROR",
        exit_code: int = EXIT_CONFIG,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, code, exit_code, details)


class TariffBoxError(TariffEquityException):
    """Raised when volumetric charges fall outside the admissible box."""

    def __init__(
        self,
        message: str = "Volumetric charges outside the tariff box",
        code: str = "DS_TARIFF_BOX_ERROR",
        exit_code: int = EXIT_CONFIG,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, code, exit_code, details)


class PreconditionError(TariffEquityException):
    """Raised when an operation is called with arguments it does not accept."""

    def __init__(
        self,
        message: str = "Precondition violated",
        code: str = "DS_TARIFF_PRECONDITION_ERROR",
        exit_code: int = EXIT_CONFIG,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, code, exit_code, details)


class OracleBudgetError(TariffEquityException):
    """Raised when active-set enumeration would exceed its inequality budget."""

    def __init__(
        self,
        message: str = "Instance exceeds the enumeration budget",
        code: str = "DS_TARIFF_ORACLE_BUDGET_ERROR",
        exit_code: int = EXIT_CONFIG,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, code, exit_code, details)


class SolverError(TariffEquityException):
    """Base class for numerical failures."""

    def __init__(
        self,
        message: str = "Solver failed",
        code: str = "DS_TARIFF_SOLVER_ERROR",
        exit_code: int = EXIT_SOLVER,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, code, exit_code, details)


class InfeasibleError(SolverError):
    """Raised when the program has no feasible point."""

    def __init__(
        self,
        message: str = "Program is infeasible",
        code: str = "DS_TARIFF_INFEASIBLE_ERROR",
        exit_code: int = EXIT_SOLVER,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, code, exit_code, details)


class UnboundedError(SolverError):
    """Raised when the objective diverges."""

    def __init__(
        self,
        message: str = "Program is unbounded",
        code: str = "DS_TARIFF_UNBOUNDED_ERROR",
        exit_code: int = EXIT_SOLVER,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, code, exit_code, details)


class MaxIterationsError(SolverError):
    """Raised when the iteration limit is reached before convergence."""

    def __init__(
        self,
        message: str = "Maximum iterations exceeded",
        code: str = "DS_TARIFF_MAX_ITERATIONS_ERROR",
        exit_code: int = EXIT_SOLVER,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, code, exit_code, details)


class NoCandidateError(SolverError):
    """Raised when active-set enumeration finds no KKT point."""

    def __init__(
        self,
        message: str = "No feasible active set found",
        code: str = "DS_TARIFF_NO_CANDIDATE_ERROR",
        exit_code: int = EXIT_SOLVER,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, code, exit_code, details)


class UnattainableFractionError(SolverError):
    """Raised when no volumetric charge raises the requested revenue."""

    def __init__(
        self,
        message: str = "Volumetric revenue target is unattainable",
        code: str = "DS_TARIFF_UNATTAINABLE_FRACTION_ERROR",
        exit_code: int = EXIT_SOLVER,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, code, exit_code, details)


class ScenarioSolveError(SolverError):
    """Raised when the equilibrium of one scenario cannot be computed."""

    def __init__(
        self,
        message: str = "Scenario solve failed",
        code: str = "DS_TARIFF_SCENARIO_ERROR",
        exit_code: int = EXIT_SOLVER,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, code, exit_code, details)
