"""
**File:** ``cli.py``
**Region:** ``ds_tariff_equity_py_lib``

Description
-----------
Command-line front end: ``solve``, ``optimal``, ``sweep``, ``stochastic``,
``verify`` and ``calibrate``.

Each command writes its tables (CSV or JSON records) and a ``run.json``
report into ``--out`` and prints its result lines to stdout. Configuration
errors exit with ``2`` and solver failures with ``3``; ``verify`` exits with
``1`` when a check is flagged.

Example
-------
.. code-block:: bash

    ds-tariff solve --config data/single_node.json --tau-b 0 --tau-s 0 --out out/solve
    ds-tariff sweep --config data/three_node.json --fractions 0:0.9:0.1 --out out/sweep
"""

import json
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

import click
import numpy as np
import pandas as pd
from ds_common_logger_py_lib import Logger
from ds_common_serde_py_lib.errors import DeserializationError, SerializationError

from .common.equilibrium import (
    SolverSettings,
    VolumetricCharges,
    kkt_residuals,
    laissez_faire_check,
    solve_equilibrium,
    surplus_decomposition,
    tariff_box,
    tau_grid,
)
from .common.errors import EXIT_CONFIG, ConfigError, TariffEquityException
from .common.market import instance_to_dict, load_market, read_document
from .common.market.models import MarketInstance
from .common.run import RunConfig, RunInfo, parse_fractions, track_run
from .common.serde import TableFormat, dumps_solution, loads_solution, write_table
from .common.stochastic import (
    ChanceSettings,
    chance_constrained_tariff,
    ev_grid,
    load_scenarios,
    stochastic_optimal_check,
)
from .common.tariff import TariffSearchSettings, optimal_tariff, outcome_row, sweep_columns, sweep_fraction
from .common.verification import OracleBudget, enumerate_active_sets, random_instance
from .libs.utils.json_default import json_default

logger = Logger.get_logger(__name__, package=True)

STOCHASTIC_GRID = 5
VERIFY_GRID = 5
EXIT_FLAGGED = 1


def _write_json(data: Any, out_dir: str | Path, name: str, run: RunInfo) -> Path:
    path = Path(out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True, default=json_default), encoding="utf-8")
    run.artifacts.append(str(path))
    logger.info(f"Wrote {path}")
    return path


def _write_table(df: pd.DataFrame, out_dir: str | Path, stem: str, config: RunConfig, run: RunInfo) -> Path:
    path = write_table(df, out_dir, stem, config.format)
    run.artifacts.append(str(path))
    return path


def _instance(config: RunConfig) -> MarketInstance:
    if config.config is None:
        raise ConfigError(message="--config is required for this command")
    return load_market(config.config)


def _market_row(instance: MarketInstance, sol: Any) -> dict[str, float]:
    row = {f"lmp_{node.label}": float(sol.p[node.id]) for node in instance.nodes}
    row.update({f"demand_{node.label}": float(sol.d[node.id] + sol.l[node.id]) for node in instance.nodes})
    row["prosumer_net_sale"] = float(np.sum(sol.net_sales))
    row["backup_generation"] = float(np.sum(sol.g_backup))
    return row


@track_run
def cmd_solve(run: RunInfo, out_dir: str | Path, config: RunConfig) -> pd.DataFrame:
    """Solve the market at fixed charges and report prices, surpluses and KKT residuals."""
    instance = _instance(config)
    solver = SolverSettings.from_check_tolerance(config.tol)
    run.settings = {"run": config.serialize(), "solver": solver.serialize()}
    tau = VolumetricCharges(tau_buy=config.tau_buy, tau_sell=config.tau_sell).check(tariff_box(instance))
    sol = solve_equilibrium(instance, tau, solver)
    kkt = kkt_residuals(instance, tau, sol)
    surplus = surplus_decomposition(instance, tau, sol)
    summary = pd.DataFrame(
        [
            {
                "tau": str(tau),
                "tau_buy": tau.tau_buy,
                "tau_sell": tau.tau_sell,
                **_market_row(instance, sol),
                **surplus.summary(),
                "max_kkt_residual": kkt.max_residual,
                "iterations": sol.iterations,
            }
        ]
    )
    _write_json(json.loads(dumps_solution(sol)), out_dir, "solution.json", run)
    _write_table(summary, out_dir, "summary", config, run)
    _write_table(kkt.to_frame().reset_index(), out_dir, "kkt", config, run)
    run.metadata["summary"] = [
        f"tau={tau} V={sol.objective:.6f} max KKT residual={kkt.max_residual:.3e}",
    ]
    return summary


@track_run
def cmd_optimal(run: RunInfo, out_dir: str | Path, config: RunConfig) -> pd.DataFrame:
    """Zero volumetric charges with equitable fixed charges."""
    instance = _instance(config)
    solver = SolverSettings.from_check_tolerance(config.tol)
    run.settings = {"run": config.serialize(), "solver": solver.serialize()}
    outcome = optimal_tariff(instance, solver=solver)
    table = pd.DataFrame([outcome_row(instance, outcome)], columns=sweep_columns(instance))
    _write_table(table, out_dir, "tariff", config, run)
    run.metadata["summary"] = [
        f"tau={outcome.tau} V={outcome.welfare:.6f} B={outcome.incidence.gap_B:.3e} "
        f"revenue residual={outcome.revenue.residual:.3e}",
    ]
    return table


@track_run
def cmd_sweep(run: RunInfo, out_dir: str | Path, config: RunConfig) -> pd.DataFrame:
    """Constrained tariffs over a grid of volumetric fractions."""
    instance = _instance(config)
    solver = SolverSettings.from_check_tolerance(config.tol)
    search = TariffSearchSettings(max_workers=config.max_workers)
    run.settings = {"run": config.serialize(), "solver": solver.serialize(), "search": search.serialize()}
    table = sweep_fraction(instance, config.fractions, search, solver)
    _write_table(table, out_dir, "sweep", config, run)
    failed = table.loc[table["status"] != "ok", "fraction"].tolist()
    run.metadata["failed_fractions"] = failed
    run.metadata["summary"] = [f"{len(table)} fraction(s), {len(table) - len(failed)} ok, failed: {failed}"]
    return table


@track_run
def cmd_stochastic(run: RunInfo, out_dir: str | Path, config: RunConfig) -> pd.DataFrame:
    """Expected welfare grid, the zero-charge check in expectation and the chance-constrained search."""
    instance = _instance(config)
    if config.scenarios is None:
        raise ConfigError(message="--scenarios is required for the stochastic command")
    solver = SolverSettings.from_check_tolerance(config.tol)
    chance = ChanceSettings(epsilon=config.epsilon, tolerance=config.tol, max_workers=config.max_workers)
    run.settings = {"run": config.serialize(), "solver": solver.serialize(), "chance": chance.serialize()}
    scenario_set = load_scenarios(config.scenarios, instance)
    grid = tau_grid(tariff_box(instance), STOCHASTIC_GRID, STOCHASTIC_GRID)
    table = ev_grid(scenario_set, grid, solver, config.max_workers)
    check = stochastic_optimal_check(scenario_set, grid, solver, tolerance=config.tol, table=table)
    result = chance_constrained_tariff(scenario_set, grid, chance, solver)
    _write_table(table, out_dir, "ev_grid", config, run)
    _write_table(result.table, out_dir, "chance", config, run)

    chance_report: dict[str, Any] = {"epsilon": chance.epsilon, "admissible_points": result.admissible_points}
    lines = [
        f"Stochastic check over {check.grid_points} points and {check.scenarios} scenario(s): "
        f"{'PASS' if check.passed else 'FLAGGED'} (margin {check.margin:.3e})"
    ]
    if result.best_index is None:
        lines.append(f"Chance constraint at epsilon={chance.epsilon:g}: no admissible grid point")
    else:
        row = result.table.iloc[result.best_index]
        chance_report.update(
            {
                "best_tau_buy": float(row["tau_buy"]),
                "best_tau_sell": float(row["tau_sell"]),
                "probability": float(row["probability"]),
                "EV": float(row["EV"]),
                "gap_B": float(row["gap_B"]),
                "gap_B_per_scenario_mean": float(row["gap_B_per_scenario_mean"]),
            }
        )
        lines.append(
            f"Chance constraint at epsilon={chance.epsilon:g}: PASS at tau={result.best_tau}, "
            f"P={float(row['probability']):.4f}"
        )
    _write_json({"check": check.serialize(), "chance": chance_report}, out_dir, "stochastic.json", run)
    run.metadata["summary"] = lines
    return table


def _check(name: str, value: float, tolerance: float) -> dict[str, Any]:
    return {"check": name, "value": value, "tolerance": tolerance, "passed": bool(value <= tolerance)}


@track_run
def cmd_verify(run: RunInfo, out_dir: str | Path, config: RunConfig, solution: str | None = None) -> pd.DataFrame:
    """Cross-check the solver against KKT residuals, the enumeration oracle and the zero-charge optimum."""
    if config.config is not None:
        instance = load_market(config.config)
    elif config.seed is not None:
        instance = random_instance(np.random.default_rng(config.seed), n_nodes=2, n_units=2)
    else:
        raise ConfigError(message="verify needs --config or --seed")
    solver = SolverSettings.from_check_tolerance(config.tol)
    budget = OracleBudget(tolerance=config.tol)
    run.settings = {"run": config.serialize(), "solver": solver.serialize(), "oracle": budget.serialize()}
    tau = VolumetricCharges(tau_buy=config.tau_buy, tau_sell=config.tau_sell).check(tariff_box(instance))
    tol = config.tol

    sol = solve_equilibrium(instance, tau, solver)
    scale = 1.0 + abs(sol.objective)
    rows = [
        _check("kkt_residual", kkt_residuals(instance, tau, sol).max_residual, tol),
        _check("surplus_identity", surplus_decomposition(instance, tau, sol).identity_residual, tol * scale),
    ]
    oracle = enumerate_active_sets(instance, tau, budget)
    rows.append(_check("oracle_objective_gap", abs(oracle.objective - sol.objective), tol * scale))
    primal = max(
        float(np.max(np.abs(a - b), initial=0.0))
        for a, b in (
            (sol.d, oracle.d),
            (sol.l, oracle.l),
            (sol.net_sales, oracle.net_sales),
            (sol.g_backup, oracle.g_backup),
            (sol.g_units, oracle.g_units),
        )
    )
    rows.append(_check("oracle_primal_gap", primal, 10.0 * tol))
    if solution is not None:
        loaded = loads_solution(Path(solution).read_text(encoding="utf-8"))
        rows.append(_check("solution_file_kkt_residual", kkt_residuals(instance, loaded.tau, loaded).max_residual, tol))
    report = laissez_faire_check(
        instance, tau_grid(tariff_box(instance), VERIFY_GRID, VERIFY_GRID), solver, tolerance=tol
    )
    rows.append(_check("laissez_faire_shortfall", max(-report.margin, 0.0), tol * (1.0 + abs(report.value_at_origin))))

    table = pd.DataFrame(rows, columns=["check", "value", "tolerance", "passed"])
    _write_table(table, out_dir, "verify", config, run)
    passed = bool(table["passed"].all())
    run.metadata["passed"] = passed
    run.metadata["summary"] = [
        f"{row.check}: {row.value:.3e} <= {row.tolerance:.1e} {'PASS' if row.passed else 'FLAGGED'}"
        for row in table.itertuples()
    ] + [f"verify: {'PASS' if passed else 'FLAGGED'}"]
    return table


@track_run
def cmd_calibrate(run: RunInfo, out_dir: str | Path, config: RunConfig) -> list[str]:
    """Calibrate a market from a calibration document and write the instance document."""
    if config.config is None:
        raise ConfigError(message="--config is required for this command")
    if "calibration" not in read_document(config.config):
        raise ConfigError(
            message=f"{config.config} is not a calibration document", details={"path": config.config}
        )
    run.settings = {"run": config.serialize()}
    instance = load_market(config.config)
    path = _write_json(instance_to_dict(instance), out_dir, "instance.json", run)
    run.metadata["summary"] = [f"Calibrated {instance.n_nodes} node(s) and {len(instance.units)} unit(s) -> {path}"]
    return [node.label for node in instance.nodes]


def _execute(body: Callable[..., tuple[Any, RunInfo]], extra: dict[str, Any] | None = None, **params: Any) -> None:
    """Build the run config, run ``body`` and map failures onto exit codes."""
    try:
        config = RunConfig(**params)
        _, run = body(config.out, config, **(extra or {}))
    except TariffEquityException as exc:
        click.echo(f"Error [{exc.code}]: {exc.message}", err=True)
        sys.exit(exc.exit_code)
    except (SerializationError, DeserializationError) as exc:
        click.echo(f"Error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    for line in run.metadata.get("summary", []):
        click.echo(line)
    if run.metadata.get("passed") is False:
        sys.exit(EXIT_FLAGGED)


def _fractions(_ctx: click.Context, _param: click.Parameter, value: str) -> list[float]:
    try:
        return parse_fractions(value)
    except ConfigError as exc:
        raise click.BadParameter(exc.message) from exc


def common_options(fn: Callable[..., Any]) -> Callable[..., Any]:
    """Options shared by every command."""
    options = [
        click.option(
            "--config",
            type=click.Path(exists=True, dir_okay=False),
            default=None,
            help="Instance or calibration document.",
        ),
        click.option(
            "--out", type=click.Path(file_okay=False), default="out", show_default=True, help="Output directory."
        ),
        click.option(
            "--format",
            "table_format",
            type=click.Choice([f.value for f in TableFormat]),
            default=TableFormat.CSV.value,
            show_default=True,
            help="Table format.",
        ),
        click.option("--tol", type=float, default=1e-6, show_default=True, help="Check tolerance."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def tau_options(fn: Callable[..., Any]) -> Callable[..., Any]:
    fn = click.option("--tau-s", "tau_sell", type=float, default=0.0, show_default=True, help="Sell charge, $/MWh.")(fn)
    return click.option("--tau-b", "tau_buy", type=float, default=0.0, show_default=True, help="Buy charge, $/MWh.")(fn)


def workers_option(fn: Callable[..., Any]) -> Callable[..., Any]:
    return click.option("--workers", "max_workers", type=int, default=None, help="Threads for independent solves.")(fn)


@click.group()
@click.version_option(package_name="ds-tariff-equity-py-lib")
def cli() -> None:
    """Market equilibria with prosumers and equity-aware retail tariffs."""


@cli.command()
@common_options
@tau_options
def solve(config: str | None, out: str, table_format: str, tol: float, tau_buy: float, tau_sell: float) -> None:
    """Solve the market at fixed volumetric charges."""
    _execute(
        cmd_solve,
        command="solve",
        config=config,
        out=out,
        format=table_format,
        tol=tol,
        tau_buy=tau_buy,
        tau_sell=tau_sell,
    )


@cli.command()
@common_options
def optimal(config: str | None, out: str, table_format: str, tol: float) -> None:
    """Optimal tariff: zero volumetric charges, equitable fixed charges."""
    _execute(cmd_optimal, command="optimal", config=config, out=out, format=table_format, tol=tol)


@cli.command()
@common_options
@workers_option
@click.option(
    "--fractions",
    callback=_fractions,
    default="0:0.9:0.1",
    show_default=True,
    help="Volumetric fractions as START:STOP:STEP or a single value.",
)
def sweep(
    config: str | None, out: str, table_format: str, tol: float, max_workers: int | None, fractions: list[float]
) -> None:
    """Constrained tariffs over a grid of volumetric fractions."""
    _execute(
        cmd_sweep,
        command="sweep",
        config=config,
        out=out,
        format=table_format,
        tol=tol,
        fractions=fractions,
        max_workers=max_workers,
    )


@cli.command()
@common_options
@workers_option
@click.option("--scenarios", type=click.Path(exists=True, dir_okay=False), default=None, help="Scenario document.")
@click.option(
    "--epsilon", type=float, default=0.1, show_default=True, help="Allowed probability of a revenue shortfall."
)
def stochastic(
    config: str | None,
    out: str,
    table_format: str,
    tol: float,
    max_workers: int | None,
    scenarios: str | None,
    epsilon: float,
) -> None:
    """Expected welfare over scenarios and the revenue chance constraint."""
    _execute(
        cmd_stochastic,
        command="stochastic",
        config=config,
        out=out,
        format=table_format,
        tol=tol,
        scenarios=scenarios,
        epsilon=epsilon,
        max_workers=max_workers,
    )


@cli.command()
@common_options
@tau_options
@click.option("--seed", type=int, default=None, help="Seed of a random instance, used without --config.")
@click.option(
    "--solution", type=click.Path(exists=True, dir_okay=False), default=None, help="Solution JSON to check as well."
)
def verify(
    config: str | None,
    out: str,
    table_format: str,
    tol: float,
    tau_buy: float,
    tau_sell: float,
    seed: int | None,
    solution: str | None,
) -> None:
    """Cross-check the solver; exit 1 when a check is flagged."""
    _execute(
        cmd_verify,
        extra={"solution": solution},
        command="verify",
        config=config,
        out=out,
        format=table_format,
        tol=tol,
        tau_buy=tau_buy,
        tau_sell=tau_sell,
        seed=seed,
    )


@cli.command()
@common_options
def calibrate(config: str | None, out: str, table_format: str, tol: float) -> None:
    """Write the instance document produced by a calibration document."""
    _execute(cmd_calibrate, command="calibrate", config=config, out=out, format=table_format, tol=tol)


def main() -> None:
    cli()


__all__ = ["cli", "main"]
