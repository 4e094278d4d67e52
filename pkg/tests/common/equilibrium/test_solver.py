"""
**File:** ``test_solver.py``
**Region:** ``tests/common/equilibrium``

Description
-----------
Tests for the interior-point QP solver on small programs with known optima.
"""

import numpy as np
import pytest

from ds_tariff_equity_py_lib.common.equilibrium import solver
from ds_tariff_equity_py_lib.common.equilibrium.program import QuadraticProgram, VariableLayout
from ds_tariff_equity_py_lib.common.equilibrium.settings import SolverSettings
from ds_tariff_equity_py_lib.common.equilibrium.solver import solve_equality_kkt, solve_qp
from ds_tariff_equity_py_lib.common.errors import InfeasibleError, MaxIterationsError, PreconditionError


def _program(
    quadratic,
    linear,
    eq_matrix=None,
    eq_rhs=None,
    ineq_matrix=None,
    ineq_rhs=None,
    lower=None,
    upper=None,
) -> QuadraticProgram:
    n = len(linear)
    layout = VariableLayout()
    for j in range(n):
        layout.add_variable(f"x[{j}]")
    return QuadraticProgram(
        layout=layout,
        quadratic=np.asarray(quadratic, dtype=float),
        linear=np.asarray(linear, dtype=float),
        eq_matrix=np.zeros((0, n)) if eq_matrix is None else np.asarray(eq_matrix, dtype=float),
        eq_rhs=np.zeros(0) if eq_rhs is None else np.asarray(eq_rhs, dtype=float),
        ineq_matrix=np.zeros((0, n)) if ineq_matrix is None else np.asarray(ineq_matrix, dtype=float),
        ineq_rhs=np.zeros(0) if ineq_rhs is None else np.asarray(ineq_rhs, dtype=float),
        lower=np.full(n, -np.inf) if lower is None else np.asarray(lower, dtype=float),
        upper=np.full(n, np.inf) if upper is None else np.asarray(upper, dtype=float),
    )


def test_unconstrained_maximum():
    """max -x^2/2 + 2x is reached at x = 2."""
    result = solve_qp(_program([[-1.0]], [2.0]))

    assert result.x == pytest.approx([2.0])
    assert result.objective == pytest.approx(2.0)


def test_binding_upper_bound_has_positive_multiplier():
    """With x <= 1 the bound binds and its multiplier equals the gradient 1."""
    result = solve_qp(_program([[-1.0]], [2.0], lower=[0.0], upper=[1.0]))

    assert result.x == pytest.approx([1.0], abs=1e-8)
    assert result.upper_mult == pytest.approx([1.0], abs=1e-6)
    assert result.lower_mult == pytest.approx([0.0], abs=1e-6)


def test_equality_multiplier_sign():
    """max -(x1^2 + x2^2)/2 with x1 + x2 = 2 has x = (1, 1) and multiplier -1."""
    result = solve_qp(_program(-np.eye(2), [0.0, 0.0], eq_matrix=[[1.0, 1.0]], eq_rhs=[2.0]))

    assert result.x == pytest.approx([1.0, 1.0])
    assert result.eq_mult == pytest.approx([-1.0])


def test_general_inequality_row():
    """A binding general row x1 + x2 <= 1 splits the optimum evenly."""
    result = solve_qp(
        _program(-np.eye(2), [2.0, 2.0], ineq_matrix=[[1.0, 1.0]], ineq_rhs=[1.0], lower=[0.0, 0.0])
    )

    assert result.x == pytest.approx([0.5, 0.5], abs=1e-8)
    assert result.ineq_mult == pytest.approx([1.5], abs=1e-6)
    assert result.licq


def test_infeasible_equalities_raise():
    """Contradictory equalities have no stationary point."""
    qp = _program(-np.eye(1), [0.0], eq_matrix=[[1.0], [1.0]], eq_rhs=[0.0, 1.0])

    with pytest.raises(InfeasibleError):
        solve_qp(qp)


def test_equality_kkt_residual():
    """The direct equality solve reports a zero residual on a consistent system."""
    x, multipliers, residual = solve_equality_kkt(np.eye(2), np.zeros(2), np.array([[1.0, 1.0]]), np.array([2.0]))

    assert x == pytest.approx([1.0, 1.0])
    assert multipliers == pytest.approx([-1.0])
    assert residual == pytest.approx(0.0, abs=1e-12)


def test_program_shape_check():
    """Inconsistent dimensions are rejected when the program is built."""
    with pytest.raises(PreconditionError, match="dimensions"):
        _program([[-1.0]], [1.0, 2.0])


@pytest.mark.parametrize(
    ("field", "value"),
    [("feasibility_tolerance", 0.0), ("max_iterations", 0), ("regularization", -1.0)],
)
def test_settings_validation(field, value):
    """Nonpositive tolerances and iteration limits are rejected."""
    with pytest.raises(PreconditionError, match=field):
        SolverSettings(**{field: value})


def test_iteration_limit_is_rescued_by_active_set():
    """An attempt cut short is finished exactly from the active set of its last iterate."""
    qp = _program(-np.eye(2), [2.0, 2.0], ineq_matrix=[[1.0, 1.0]], ineq_rhs=[1.0], lower=[0.0, 0.0])

    result = solve_qp(qp, SolverSettings(max_iterations=4))

    assert result.polished
    assert result.x == pytest.approx([0.5, 0.5], abs=1e-9)
    assert result.ineq_mult == pytest.approx([1.5], abs=1e-9)


def test_restart_uses_scaled_start(monkeypatch):
    """A failed first attempt is retried from a start scaled to the program."""
    starts = []
    original = solver._interior_point

    def recording(problem, settings, start):
        starts.append(start)
        run = original(problem, settings, start)
        if len(starts) == 1:
            run.converged = False
            run.norms = (1.0, 1.0, 1.0)
        return run

    monkeypatch.setattr(solver, "_interior_point", recording)
    monkeypatch.setattr(solver, "_rescue", lambda problem, run, ftol: None)
    qp = _program([[-1.0]], [2.0], lower=[0.0], upper=[10.0])

    result = solve_qp(qp)

    assert len(starts) == 2
    assert starts[1].multiplier == pytest.approx(np.sqrt(3.0))
    assert starts[1].regularization == solver.RESTART_REGULARIZATION
    assert result.x == pytest.approx([2.0], abs=1e-8)


def test_exhausted_restarts_raise(monkeypatch):
    """When every attempt fails the last failure is raised."""
    original = solver._interior_point

    def failing(problem, settings, start):
        run = original(problem, settings, start)
        run.converged = False
        run.norms = (0.0, 0.0, 1.0)
        return run

    monkeypatch.setattr(solver, "_interior_point", failing)
    monkeypatch.setattr(solver, "_rescue", lambda problem, run, ftol: None)

    with pytest.raises(MaxIterationsError, match="did not converge"):
        solve_qp(_program([[-1.0]], [2.0], lower=[0.0], upper=[10.0]))


def test_settings_from_check_tolerance():
    """Solver tolerances sit a thousand times below the check tolerance."""
    settings = SolverSettings.from_check_tolerance(1e-6, max_iterations=50)

    assert settings.feasibility_tolerance == pytest.approx(SolverSettings().feasibility_tolerance)
    assert settings.duality_gap_tolerance == pytest.approx(SolverSettings().duality_gap_tolerance)
    assert settings.max_iterations == 50
    with pytest.raises(PreconditionError, match="tolerance"):
        SolverSettings.from_check_tolerance(0.0)
