"""
**File:** ``solver.py``
**Region:** ``ds_tariff_equity_py_lib/common/equilibrium``

Description
-----------
Dense primal-dual interior-point method (Mehrotra predictor-corrector) for the
small concave quadratic programs produced by
:func:`~ds_tariff_equity_py_lib.common.equilibrium.program.assemble_welfare_program`.

Internally the program is handled in minimisation form
``min 0.5 x'Px + q'x`` with ``P = -Q`` and ``q = -c``; general inequality
rows and finite variable bounds are stacked into one block ``G x <= h``.
Multipliers follow the maximisation convention
``grad f = A'nu + G'mu`` with ``mu >= 0``, which for the welfare program makes
the nodal-balance multipliers the LMPs.

After convergence the active set is guessed from the slack/multiplier split
and the equality-constrained KKT system is solved exactly. The polished point
is kept only when it is feasible and sign-correct.

When the corrector step is blocked by the boundary a centred step is taken
instead. An attempt that still fails is rescued by polishing its last iterate,
and otherwise restarted once from slacks and multipliers scaled to the
program's magnitudes.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.equilibrium.solver import solve_qp

    result = solve_qp(qp)
    print(result.x, result.eq_mult)
"""

import warnings
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from ds_common_logger_py_lib import Logger

from ..errors import InfeasibleError, MaxIterationsError, SolverError, UnboundedError
from .program import QuadraticProgram
from .settings import SolverSettings

logger = Logger.get_logger(__name__, package=True)

STEP_FRACTION = 0.99
DIVERGENCE_LIMIT = 1e12
ACCEPTABLE_FACTOR = 1e3
SHORT_STEP = 0.1
CENTRING_SIGMA = 0.5
RESTART_REGULARIZATION = 1e-8


@dataclass(kw_only=True)
class PrimalDualSolution:
    """Primal point and multipliers of every constraint."""

    x: np.ndarray
    eq_mult: np.ndarray
    """Free multipliers of ``A x = b``."""
    ineq_mult: np.ndarray
    """Nonnegative multipliers of the general rows ``G x <= h``."""
    lower_mult: np.ndarray
    """Nonnegative multipliers of ``x >= lb``; zero where unbounded."""
    upper_mult: np.ndarray
    """Nonnegative multipliers of ``x <= ub``; zero where unbounded."""
    objective: float
    iterations: int = 0
    polished: bool = False
    active_constraints: int = 0
    """Equalities plus inequalities considered active."""
    constraint_rank: int = 0
    """Rank of the active constraint gradients."""

    @property
    def licq(self) -> bool:
        """Linear independence of the active constraint gradients."""
        return self.constraint_rank == self.active_constraints


@dataclass(frozen=True)
class StackedInequalities:
    """General rows followed by finite upper bounds and negated finite lower bounds."""

    matrix: np.ndarray
    rhs: np.ndarray
    n_general: int
    upper_index: np.ndarray
    lower_index: np.ndarray

    @property
    def size(self) -> int:
        return int(self.rhs.shape[0])

    def split(self, mult: np.ndarray, n_vars: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Split stacked multipliers into general, lower-bound and upper-bound parts."""
        n_upper = self.upper_index.shape[0]
        general = mult[: self.n_general]
        upper = np.zeros(n_vars)
        lower = np.zeros(n_vars)
        upper[self.upper_index] = mult[self.n_general : self.n_general + n_upper]
        lower[self.lower_index] = mult[self.n_general + n_upper :]
        return general, lower, upper

    def bound_rows(self) -> list[tuple[int, int, str]]:
        """``(row, variable, "upper"|"lower")`` for every bound row."""
        rows = [(self.n_general + k, int(j), "upper") for k, j in enumerate(self.upper_index)]
        offset = self.n_general + self.upper_index.shape[0]
        rows.extend((offset + k, int(j), "lower") for k, j in enumerate(self.lower_index))
        return rows


def stack_inequalities(qp: QuadraticProgram) -> StackedInequalities:
    n = qp.n_vars
    upper_index = np.flatnonzero(np.isfinite(qp.upper))
    lower_index = np.flatnonzero(np.isfinite(qp.lower))
    eye = np.eye(n)
    matrix = np.vstack([qp.ineq_matrix, eye[upper_index], -eye[lower_index]])
    rhs = np.concatenate([qp.ineq_rhs, qp.upper[upper_index], -qp.lower[lower_index]])
    return StackedInequalities(
        matrix=matrix,
        rhs=rhs,
        n_general=qp.ineq_matrix.shape[0],
        upper_index=upper_index,
        lower_index=lower_index,
    )


def solve_equality_kkt(
    hessian: np.ndarray, gradient: np.ndarray, matrix: np.ndarray, rhs: np.ndarray
) -> tuple[np.ndarray, np.ndarray, float]:
    """
    Stationary point of ``min 0.5 x'Hx + g'x`` subject to ``M x = r``.

    Solved in the least-squares sense so redundant rows are tolerated.

    Returns:
        ``(x, multipliers, residual)`` with ``H x + g + M'multipliers = 0``.
    """
    n = gradient.shape[0]
    m = rhs.shape[0]
    kkt = np.block([[hessian, matrix.T], [matrix, np.zeros((m, m))]])
    target = np.concatenate([-gradient, rhs])
    solution = np.linalg.lstsq(kkt, target, rcond=None)[0]
    residual = float(np.max(np.abs(kkt @ solution - target), initial=0.0))
    return solution[:n], solution[n:], residual


def solve_qp(
    qp: QuadraticProgram, settings: SolverSettings | None = None, x0: np.ndarray | None = None
) -> PrimalDualSolution:
    """
    Solve ``qp`` to the tolerances in ``settings``.

    ``x0`` overrides the default starting point; slacks are floored at one so
    the start is always interior. An attempt that stalls is first rescued by
    solving the active set guessed from its last iterate, then restarted once
    from a start scaled to the program's magnitudes with a stronger
    regularization.

    Raises:
        InfeasibleError: If the residuals cannot be driven to zero.
        UnboundedError: If the iterates diverge.
        MaxIterationsError: If the iteration limit is reached.
    """
    settings = settings or SolverSettings()
    problem = _Problem.from_program(qp)
    stacked = problem.stacked
    ftol = settings.feasibility_tolerance

    if stacked.size == 0:
        x, y, residual = solve_equality_kkt(problem.hessian, problem.gradient, problem.eq_matrix, problem.eq_rhs)
        if residual > ftol * max(problem.scale_q, problem.scale_b):
            raise InfeasibleError(
                message=f"Equality-constrained program has no stationary point (residual {residual:.3e})",
                details={"residual": residual},
            )
        no_rows = np.zeros(0, dtype=bool)
        return build_primal_dual(qp, stacked, x, y, np.zeros(0), iterations=0, polished=True, active=no_rows)

    starts = [
        _Start(x0=x0, slack_floor=1.0, multiplier=1.0, regularization=settings.regularization),
        _Start(
            x0=None,
            slack_floor=float(np.sqrt(problem.scale_h)),
            multiplier=float(np.sqrt(problem.scale_q)),
            regularization=max(settings.regularization, RESTART_REGULARIZATION),
        ),
    ]
    failure: SolverError | None = None
    iterations = 0
    for attempt, start in enumerate(starts, start=1):
        run = _interior_point(problem, settings, start)
        iterations += run.iteration
        if run.converged or run.acceptable(settings):
            if not run.converged:
                logger.warning(
                    f"Interior point stopped at acceptable accuracy after {run.iteration} iterations (mu {run.mu:.2e})"
                )
            return _finish(qp, problem, run, settings, iterations)
        rescued = _rescue(problem, run, ftol)
        if rescued is not None:
            x, y, z, active = rescued
            logger.info(f"Interior point attempt {attempt} stalled; solved the active set of its last iterate")
            return build_primal_dual(qp, stacked, x, y, z, iterations=iterations, polished=True, active=active)
        failure = run.failure(ftol)
        logger.warning(f"Interior point attempt {attempt} failed: {failure.message}")
    assert failure is not None
    raise failure


@dataclass(frozen=True)
class _Problem:
    """Minimisation form of a welfare program with its residual scales."""

    hessian: np.ndarray
    gradient: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    stacked: StackedInequalities
    scale_q: float
    scale_b: float
    scale_h: float

    @classmethod
    def from_program(cls, qp: QuadraticProgram) -> "_Problem":
        stacked = stack_inequalities(qp)
        return cls(
            hessian=-qp.quadratic,
            gradient=-qp.linear,
            eq_matrix=qp.eq_matrix,
            eq_rhs=qp.eq_rhs,
            stacked=stacked,
            scale_q=1.0 + float(np.max(np.abs(qp.linear), initial=0.0)),
            scale_b=1.0 + float(np.max(np.abs(qp.eq_rhs), initial=0.0)),
            scale_h=1.0 + float(np.max(np.abs(stacked.rhs), initial=0.0)),
        )


@dataclass(frozen=True)
class _Start:
    x0: np.ndarray | None
    slack_floor: float
    multiplier: float
    regularization: float


@dataclass(kw_only=True)
class _Run:
    """Last iterate of one interior-point attempt."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    s: np.ndarray
    iteration: int
    converged: bool
    norms: tuple[float, float, float]
    mu: float

    def acceptable(self, settings: SolverSettings) -> bool:
        return (
            max(self.norms) <= ACCEPTABLE_FACTOR * settings.feasibility_tolerance
            and self.mu <= ACCEPTABLE_FACTOR * settings.complementarity_tolerance
        )

    def failure(self, ftol: float) -> SolverError:
        primal = max(self.norms[0], self.norms[1])
        if primal > np.sqrt(ftol):
            return InfeasibleError(
                message=f"Primal residual {primal:.3e} did not vanish after {self.iteration} iterations",
                details={"iterations": self.iteration, "primal_residual": primal},
            )
        return MaxIterationsError(
            message=f"Interior point did not converge in {self.iteration} iterations",
            details={"iterations": self.iteration, "residuals": list(self.norms), "mu": self.mu},
        )


def _interior_point(problem: _Problem, settings: SolverSettings, start: _Start) -> _Run:
    hessian, gradient = problem.hessian, problem.gradient
    eq_matrix, eq_rhs = problem.eq_matrix, problem.eq_rhs
    ineq_matrix, ineq_rhs = problem.stacked.matrix, problem.stacked.rhs
    n, me, mi = gradient.shape[0], eq_rhs.shape[0], ineq_rhs.shape[0]
    reg = start.regularization

    if start.x0 is None:
        x = np.linalg.lstsq(
            _kkt_matrix(hessian + ineq_matrix.T @ ineq_matrix, eq_matrix, reg),
            np.concatenate([-gradient + ineq_matrix.T @ ineq_rhs, eq_rhs]),
            rcond=None,
        )[0][:n]
    else:
        x = np.asarray(start.x0, dtype=float).copy()
    s = np.maximum(ineq_rhs - ineq_matrix @ x, start.slack_floor)
    z = np.full(mi, start.multiplier)
    y = np.zeros(me)

    converged = False
    iteration = 0
    norms = (np.inf, np.inf, np.inf)
    mu = np.inf
    for iteration in range(1, settings.max_iterations + 1):
        r_dual = hessian @ x + gradient + eq_matrix.T @ y + ineq_matrix.T @ z
        r_prim = eq_matrix @ x - eq_rhs
        r_ineq = ineq_matrix @ x + s - ineq_rhs
        gap = float(s @ z)
        mu = gap / mi
        objective = float(0.5 * x @ hessian @ x + gradient @ x)
        norms = (
            float(np.max(np.abs(r_prim), initial=0.0)) / problem.scale_b,
            float(np.max(np.abs(r_ineq), initial=0.0)) / problem.scale_h,
            float(np.max(np.abs(r_dual), initial=0.0)) / problem.scale_q,
        )
        logger.debug(
            f"iter {iteration:3d} obj {objective:.10e} prim {norms[0]:.2e} ineq {norms[1]:.2e} "
            f"dual {norms[2]:.2e} mu {mu:.2e}"
        )
        if max(norms) <= settings.feasibility_tolerance and (
            mu <= settings.complementarity_tolerance or gap <= settings.duality_gap_tolerance * (1.0 + abs(objective))
        ):
            converged = True
            break
        if float(np.max(np.abs(x), initial=0.0)) > DIVERGENCE_LIMIT:
            raise UnboundedError(
                message=f"Iterates diverged after {iteration} iterations",
                details={"iteration": iteration, "objective": -objective},
            )

        weight = z / s
        factor = _factor(_kkt_matrix(hessian + (ineq_matrix.T * weight) @ ineq_matrix, eq_matrix, reg))

        residuals = (r_dual, r_prim, r_ineq)
        dx, dy, dz, ds = _newton_step(factor, ineq_matrix, residuals, s, weight, s * z)
        alpha_aff = _max_step(s, ds, z, dz)
        mu_aff = float((s + alpha_aff * ds) @ (z + alpha_aff * dz)) / mi
        sigma = (mu_aff / mu) ** 3 if mu > 0 else 0.0
        dx, dy, dz, ds = _newton_step(factor, ineq_matrix, residuals, s, weight, s * z + ds * dz - sigma * mu)
        alpha = min(1.0, STEP_FRACTION * _max_step(s, ds, z, dz, limit=np.inf))
        if not alpha >= SHORT_STEP:
            # corrector blocked by the boundary: fall back to a centred step
            centred = _newton_step(factor, ineq_matrix, residuals, s, weight, s * z - CENTRING_SIGMA * mu)
            alpha_centred = min(1.0, STEP_FRACTION * _max_step(s, centred[3], z, centred[2], limit=np.inf))
            if np.all(np.isfinite(centred[0])) and (alpha_centred > alpha or not np.all(np.isfinite(dx))):
                (dx, dy, dz, ds), alpha = centred, alpha_centred
        if not np.all(np.isfinite(dx)) or alpha < 1e-12:
            logger.debug(f"Interior-point step stalled at iteration {iteration} (alpha {alpha:.2e})")
            break
        x = x + alpha * dx
        y = y + alpha * dy
        z = z + alpha * dz
        s = s + alpha * ds
    return _Run(x=x, y=y, z=z, s=s, iteration=iteration, converged=converged, norms=norms, mu=mu)


def _finish(
    qp: QuadraticProgram, problem: _Problem, run: _Run, settings: SolverSettings, iterations: int
) -> PrimalDualSolution:
    active = run.s < run.z
    if settings.polish:
        polished = _polish(run.x, problem, active, settings.feasibility_tolerance)
        if polished is not None:
            x, y, z = polished
            logger.debug(f"Polished active set of {int(active.sum())} inequalities")
            return build_primal_dual(qp, problem.stacked, x, y, z, iterations=iterations, polished=True, active=active)
        logger.debug("Polish rejected; keeping interior-point iterate")
    return build_primal_dual(
        qp, problem.stacked, run.x, run.y, run.z, iterations=iterations, polished=False, active=active
    )


def _rescue(
    problem: _Problem, run: _Run, ftol: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray] | None:
    """Exact KKT point of an active set guessed from a stalled iterate, if one is sign-correct and feasible."""
    if not (np.all(np.isfinite(run.x)) and np.all(np.isfinite(run.s)) and np.all(np.isfinite(run.z))):
        return None
    guesses = (run.s < run.z, run.s * problem.scale_q < run.z * problem.scale_h)
    for active in guesses:
        polished = _polish(run.x, problem, active, ftol)
        if polished is not None:
            return (*polished, active)
    return None


def _kkt_matrix(block: np.ndarray, eq_matrix: np.ndarray, reg: float) -> np.ndarray:
    n = block.shape[0]
    me = eq_matrix.shape[0]
    return np.block([[block + reg * np.eye(n), eq_matrix.T], [eq_matrix, -reg * np.eye(me)]])


def _newton_step(
    factor: Callable[[np.ndarray], np.ndarray],
    ineq_matrix: np.ndarray,
    residuals: tuple[np.ndarray, np.ndarray, np.ndarray],
    s: np.ndarray,
    weight: np.ndarray,
    r_comp: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Search direction ``(dx, dy, dz, ds)`` for complementarity target ``r_comp``."""
    r_dual, r_prim, r_ineq = residuals
    n = r_dual.shape[0]
    rhs_x = -r_dual - ineq_matrix.T @ (weight * r_ineq - r_comp / s)
    step = factor(np.concatenate([rhs_x, -r_prim]))
    dx, dy = step[:n], step[n:]
    dz = weight * (ineq_matrix @ dx + r_ineq) - r_comp / s
    ds = -r_ineq - ineq_matrix @ dx
    return dx, dy, dz, ds


def _factor(matrix: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """LU-factor ``matrix``; fall back to least squares when it is numerically singular."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        try:
            lu = scipy.linalg.lu_factor(matrix)
            if np.all(np.isfinite(lu[0])) and np.min(np.abs(np.diag(lu[0]))) > 0:
                return lambda rhs: scipy.linalg.lu_solve(lu, rhs)
        except (ValueError, np.linalg.LinAlgError):
            pass
    return lambda rhs: np.linalg.lstsq(matrix, rhs, rcond=None)[0]


def _max_step(s: np.ndarray, ds: np.ndarray, z: np.ndarray, dz: np.ndarray, limit: float = 1.0) -> float:
    alpha = limit
    for value, delta in ((s, ds), (z, dz)):
        shrinking = delta < 0
        if np.any(shrinking):
            alpha = min(alpha, float(np.min(-value[shrinking] / delta[shrinking])))
    return alpha


def _polish(
    start: np.ndarray, problem: _Problem, active: np.ndarray, ftol: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray] | None:
    """Exact KKT point of the guessed active set, as the smallest correction of ``start``."""
    hessian, gradient = problem.hessian, problem.gradient
    ineq_matrix, ineq_rhs = problem.stacked.matrix, problem.stacked.rhs
    me = problem.eq_rhs.shape[0]
    matrix = np.vstack([problem.eq_matrix, ineq_matrix[active]])
    rhs = np.concatenate([problem.eq_rhs, ineq_rhs[active]])
    step, mult, residual = solve_equality_kkt(hessian, hessian @ start + gradient, matrix, rhs - matrix @ start)
    x = start + step
    if residual > ftol * max(problem.scale_q, problem.scale_h):
        return None
    y = mult[:me]
    z_active = mult[me:]
    if np.any(z_active < -ftol * problem.scale_q):
        return None
    if np.any(ineq_rhs - ineq_matrix @ x < -ftol * problem.scale_h):
        return None
    z = np.zeros(ineq_rhs.shape[0])
    z[active] = np.maximum(z_active, 0.0)
    return x, y, z


def build_primal_dual(
    qp: QuadraticProgram,
    stacked: StackedInequalities,
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
    *,
    iterations: int,
    polished: bool,
    active: np.ndarray,
) -> PrimalDualSolution:
    x = x.copy()
    if polished:
        for row, var, kind in stacked.bound_rows():
            if active[row]:
                x[var] = qp.upper[var] if kind == "upper" else qp.lower[var]
    general, lower, upper = stacked.split(z, qp.n_vars)
    gradients = np.vstack([qp.eq_matrix, stacked.matrix[active]]) if stacked.size else qp.eq_matrix
    active_count = int(gradients.shape[0])
    rank = int(np.linalg.matrix_rank(gradients)) if active_count else 0
    return PrimalDualSolution(
        x=x,
        eq_mult=y,
        ineq_mult=general,
        lower_mult=lower,
        upper_mult=upper,
        objective=qp.objective(x),
        iterations=iterations,
        polished=polished,
        active_constraints=active_count,
        constraint_rank=rank,
    )
