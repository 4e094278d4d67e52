"""
**File:** ``program.py``
**Region:** ``ds_tariff_equity_py_lib/common/equilibrium``

Description
-----------
Assemble the centralised welfare program whose optimum is the market
equilibrium at given volumetric charges.

The program maximises ``0.5 x'Qx + c'x`` subject to ``A x = b``,
``G x <= h`` and ``lb <= x <= ub``. Variables per node are consumer demand
``d``, prosumer consumption ``l``, grid sales ``z_sell`` and purchases
``z_buy``, backup output ``g_backup`` (only where the group exists), then the
output of every unit, then the hub flow ``y`` of every node.

Equality rows are the prosumer balances, the system balance ``sum(y) = 0`` and
the nodal balances whose multipliers are the LMPs. Inequality rows are the
two directions of every line limit.

Example
-------
.. code-block:: python

    from ds_tariff_equity_py_lib.common.equilibrium.program import assemble_welfare_program

    qp = assemble_welfare_program(instance, VolumetricCharges(tau_buy=0.0, tau_sell=0.0))
    print(qp.layout.n_vars)
"""

from dataclasses import dataclass, field

import numpy as np
from ds_common_logger_py_lib import Logger

from ..errors import PreconditionError
from ..market.models import MarketInstance
from .charges import VolumetricCharges, tariff_box

logger = Logger.get_logger(__name__, package=True)


@dataclass(kw_only=True)
class VariableLayout:
    """Index bookkeeping between the market and the flat program vectors."""

    n_vars: int = 0
    d: dict[int, int] = field(default_factory=dict)
    l: dict[int, int] = field(default_factory=dict)  # noqa: E741
    z_sell: dict[int, int] = field(default_factory=dict)
    z_buy: dict[int, int] = field(default_factory=dict)
    g_backup: dict[int, int] = field(default_factory=dict)
    units: list[int] = field(default_factory=list)
    """Variable index of every unit, aligned with ``instance.units``."""
    y: list[int] = field(default_factory=list)
    prosumer_balance: dict[int, int] = field(default_factory=dict)
    """Equality row of each prosumer balance."""
    system_balance: int = -1
    nodal_balance: list[int] = field(default_factory=list)
    line_plus: list[int] = field(default_factory=list)
    """Inequality row of ``PTDF y <= T`` per line."""
    line_minus: list[int] = field(default_factory=list)
    """Inequality row of ``-PTDF y <= T`` per line."""
    variable_labels: list[str] = field(default_factory=list)
    equality_labels: list[str] = field(default_factory=list)
    inequality_labels: list[str] = field(default_factory=list)

    def add_variable(self, label: str) -> int:
        self.variable_labels.append(label)
        self.n_vars += 1
        return self.n_vars - 1


@dataclass(kw_only=True)
class QuadraticProgram:
    """Concave QP in maximisation form with explicit variable bounds."""

    layout: VariableLayout
    quadratic: np.ndarray
    """Q, negative semidefinite."""
    linear: np.ndarray
    """c."""
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    ineq_matrix: np.ndarray
    ineq_rhs: np.ndarray
    lower: np.ndarray
    """Lower bounds, ``-inf`` where free."""
    upper: np.ndarray
    """Upper bounds, ``+inf`` where free."""

    def __post_init__(self) -> None:
        n = self.linear.shape[0]
        shapes_ok = (
            self.quadratic.shape == (n, n)
            and self.eq_matrix.shape == (self.eq_rhs.shape[0], n)
            and self.ineq_matrix.shape == (self.ineq_rhs.shape[0], n)
            and self.lower.shape == (n,)
            and self.upper.shape == (n,)
        )
        if not shapes_ok:
            raise PreconditionError(message="Quadratic program dimensions are inconsistent", details={"n": n})
        if np.any(self.lower > self.upper):
            raise PreconditionError(message="Quadratic program has a lower bound above its upper bound")

    @property
    def n_vars(self) -> int:
        return int(self.linear.shape[0])

    def objective(self, x: np.ndarray) -> float:
        return float(0.5 * x @ self.quadratic @ x + self.linear @ x)


def trade_cap(instance: MarketInstance, node: int) -> float:
    """Upper bound on a prosumer's gross sales and purchases; slack whenever ``tau_sell < tau_buy``."""
    group = instance.prosumer_at(node)
    spec = instance.nodes[node]
    if group is None:
        return 0.0
    return group.renewable_output + group.backup_capacity + spec.prosumer_fraction * spec.demand_horizontal_intercept


def assemble_welfare_program(instance: MarketInstance, tau: VolumetricCharges) -> QuadraticProgram:
    """
    Build the welfare program of ``instance`` at charges ``tau``.

    Args:
        instance: A valid market instance.
        tau: Volumetric charges inside the instance's tariff box.

    Returns:
        The concave quadratic program with its layout.

    Raises:
        TariffBoxError: If ``tau`` lies outside the box.
    """
    tau.check(tariff_box(instance))
    layout = VariableLayout()
    diag: list[float] = []
    linear: list[float] = []
    lower: list[float] = []
    upper: list[float] = []

    def variable(label: str, quad: float, lin: float, lo: float, hi: float) -> int:
        diag.append(quad)
        linear.append(lin)
        lower.append(lo)
        upper.append(hi)
        return layout.add_variable(label)

    for node in instance.nodes:
        i = node.id
        if node.has_consumers:
            layout.d[i] = variable(
                f"d[{i}]", -node.consumer_slope, node.demand_vertical_intercept - tau.tau_buy, 0.0, np.inf
            )
        if node.has_prosumers:
            group = instance.prosumer_at(i)
            assert group is not None
            cap = trade_cap(instance, i)
            layout.l[i] = variable(f"l[{i}]", -node.prosumer_slope, node.demand_vertical_intercept, 0.0, np.inf)
            layout.z_sell[i] = variable(f"z_sell[{i}]", 0.0, tau.tau_sell, 0.0, cap)
            layout.z_buy[i] = variable(f"z_buy[{i}]", 0.0, -tau.tau_buy, 0.0, cap)
            layout.g_backup[i] = variable(
                f"g_backup[{i}]",
                -group.backup_cost_quadratic,
                -group.backup_cost_linear,
                0.0,
                group.backup_capacity,
            )
    for unit in instance.units:
        layout.units.append(
            variable(f"g[{unit.key}]", -unit.cost_quadratic, -unit.cost_linear, 0.0, unit.capacity)
        )
    for node in instance.nodes:
        layout.y.append(variable(f"y[{node.id}]", 0.0, 0.0, -np.inf, np.inf))

    n = layout.n_vars
    eq_rows: list[np.ndarray] = []
    eq_rhs: list[float] = []

    def equality(label: str, row: np.ndarray, rhs: float) -> int:
        eq_rows.append(row)
        eq_rhs.append(rhs)
        layout.equality_labels.append(label)
        return len(eq_rows) - 1

    for i in layout.l:
        group = instance.prosumer_at(i)
        assert group is not None
        row = np.zeros(n)
        row[layout.l[i]] = 1.0
        row[layout.z_sell[i]] = 1.0
        row[layout.z_buy[i]] = -1.0
        row[layout.g_backup[i]] = -1.0
        layout.prosumer_balance[i] = equality(f"prosumer_balance[{i}]", row, group.renewable_output)

    row = np.zeros(n)
    row[layout.y] = 1.0
    layout.system_balance = equality("system_balance", row, 0.0)

    for node in instance.nodes:
        i = node.id
        row = np.zeros(n)
        row[layout.y[i]] = 1.0
        for position, unit in enumerate(instance.units):
            if unit.node == i:
                row[layout.units[position]] = -1.0
        if i in layout.z_sell:
            row[layout.z_sell[i]] = -1.0
            row[layout.z_buy[i]] = 1.0
        if i in layout.d:
            row[layout.d[i]] = 1.0
        layout.nodal_balance.append(equality(f"nodal_balance[{i}]", row, 0.0))

    ptdf = instance.network.matrix(instance.n_nodes)
    ineq_rows: list[np.ndarray] = []
    ineq_rhs: list[float] = []
    for k, limit in enumerate(instance.network.limits):
        for sign, rows, label in ((1.0, layout.line_plus, "line_plus"), (-1.0, layout.line_minus, "line_minus")):
            row = np.zeros(n)
            row[layout.y] = sign * ptdf[k]
            ineq_rows.append(row)
            ineq_rhs.append(limit)
            layout.inequality_labels.append(f"{label}[{k}]")
            rows.append(len(ineq_rows) - 1)

    qp = QuadraticProgram(
        layout=layout,
        quadratic=np.diag(np.asarray(diag, dtype=float)),
        linear=np.asarray(linear, dtype=float),
        eq_matrix=np.vstack(eq_rows) if eq_rows else np.zeros((0, n)),
        eq_rhs=np.asarray(eq_rhs, dtype=float),
        ineq_matrix=np.vstack(ineq_rows) if ineq_rows else np.zeros((0, n)),
        ineq_rhs=np.asarray(ineq_rhs, dtype=float),
        lower=np.asarray(lower, dtype=float),
        upper=np.asarray(upper, dtype=float),
    )
    logger.debug(
        f"Assembled welfare program: {n} variables, {len(eq_rows)} equalities, {len(ineq_rows)} line rows"
    )
    return qp
