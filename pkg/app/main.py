"""Command-line front end: sharp constants, asymptotics, Bellman verification and Monte-Carlo runs.

Exit codes: 0 success, 1 failed verification, 2 usage or domain error,
3 numerical failure.
"""

from pathlib import Path
from typing import Callable, List, Optional

import numpy as np
import pandas as pd
import typer
from pydantic import ValidationError

from app.output import write_csv, write_json
from bellman.candidate import BellmanCandidate
from bellman.verify import verify_all
from infra.config_helper import apply_run_config
from infra.config_manager import RunConfig, RunConfigManager
from infra.config_models import config
from martingale_sim.engine import run_mc
from martingale_sim.strategies import get_strategy
from martingale_sim.strategy_ids import StrategyID
from sharp_constant.asymptotics import asymptotics_report
from sharp_constant.constants import compute_sharp_constants
from sharp_constant.lemmas import run_lemma_suite
from specfun.legendre import LegendreSolution
from utils.errors import ConstraintViolation, DomainError, NumericalFailure
from utils.log import log_debug, log_error, set_log_level_to_debug

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

DUMP_EDGE_GAP = 1e-6

cli = typer.Typer(add_completion=False, no_args_is_help=True, help=__doc__)

_state: dict = {"config_manager": None}


@cli.callback()
def main(
    debug: bool = typer.Option(config.debug, "--debug", help="Log at debug level on stderr"),
    config_path: Optional[Path] = typer.Option(
        None, "--config", help="YAML run defaults (overrides SHARP_MTG_CONFIG_PATH)"
    ),
) -> None:
    if debug or config.log_level == "DEBUG":
        set_log_level_to_debug()
    try:
        manager = RunConfigManager(str(config_path) if config_path else None)
    except (FileNotFoundError, ValidationError) as exc:
        log_error(str(exc))
        raise typer.Exit(EXIT_USAGE)
    log_debug(f"run defaults loaded from {manager.get_config_source()}")
    _state["config_manager"] = manager


def _run(body: Callable[[], int]) -> None:
    """Run a command body and translate errors into exit codes."""
    try:
        code = body()
    except (ValidationError, DomainError, ConstraintViolation) as exc:
        log_error(str(exc))
        raise typer.Exit(EXIT_USAGE)
    except NumericalFailure as exc:
        log_error(str(exc))
        raise typer.Exit(EXIT_NUMERICAL)
    raise typer.Exit(code)


def _run_config(command: str, **overrides) -> RunConfig:
    return apply_run_config(command, _state["config_manager"], overrides)


def _parse_p_list(text: Optional[str]) -> Optional[List[float]]:
    if text is None:
        return None
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise DomainError(f"--p-list must be a comma-separated list of numbers, got {text!r}")


@cli.command()
def constant(
    p: float = typer.Option(..., "--p", help="Exponent p >= 2"),
    zero_tol: Optional[float] = typer.Option(None, "--zero-tol", help="Bracket width of z_p"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output file (default stdout)"),
    fmt: str = typer.Option("json", "--format", help="json or csv"),
) -> None:
    """Print p, alpha, z_p, c_p, a_p and i_p."""

    def body() -> int:
        run = _run_config("constant", p=p, zero_tol=zero_tol, out=out, format=fmt)
        assert run.p is not None
        sol = LegendreSolution.from_p(run.p, **run.numerics.solution_settings())
        payload = compute_sharp_constants(run.p, run.zero_tol, sol).as_dict()
        if run.format == "csv":
            write_csv(pd.DataFrame([payload]), run.out)
        else:
            write_json(payload, run.out)
        return EXIT_OK

    _run(body)


@cli.command()
def table(
    p_list: Optional[str] = typer.Option(None, "--p-list", help="Comma-separated ascending exponents"),
    zero_tol: Optional[float] = typer.Option(None, "--zero-tol", help="Bracket width of z_p"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output file (default stdout)"),
) -> None:
    """CSV of p, z_p, c_p, p(1 - z_p), c_p/p and comparison constants."""

    def body() -> int:
        run = _run_config("table", p_list=_parse_p_list(p_list), zero_tol=zero_tol, out=out, format="csv")
        assert run.p_list is not None
        report = asymptotics_report(run.p_list, run.zero_tol)
        write_csv(report.to_frame(), run.out, report.header_lines())
        return EXIT_OK

    _run(body)


@cli.command()
def verify(
    p: float = typer.Option(..., "--p", help="Exponent p > 2"),
    grid: Optional[int] = typer.Option(None, "--grid", help="Points of the verification grids"),
    quad_grid: Optional[int] = typer.Option(
        None, "--quad-grid", help="Points of the quadratic-form grid (default: --grid when given)"
    ),
    directions: Optional[int] = typer.Option(None, "--directions", help="Direction samples per grid point"),
    num_tol: Optional[float] = typer.Option(None, "--num-tol", help="Scaled slack of the '<= 0' checks"),
    zero_tol: Optional[float] = typer.Option(None, "--zero-tol", help="Bracket width of z_p"),
    override_c: Optional[float] = typer.Option(None, "--override-c", help="Replace the obstacle constant c_p"),
    dump: Optional[Path] = typer.Option(None, "--dump", help="Write (s, g, g', g'', Dg, D~g) as CSV"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output file (default stdout)"),
) -> None:
    """Run the lemma suite and the Bellman certification; JSON report, exit 0 iff all checks pass."""

    def body() -> int:
        run = _run_config(
            "verify",
            p=p,
            grid=grid,
            quad_grid=quad_grid if quad_grid is not None else grid,
            directions=directions,
            num_tol=num_tol,
            zero_tol=zero_tol,
            override_c=override_c,
            out=out,
            format="json",
        )
        assert run.p is not None
        sol = LegendreSolution.from_p(run.p, **run.numerics.solution_settings())
        consts = compute_sharp_constants(run.p, run.zero_tol, sol)
        candidate = BellmanCandidate(consts=consts, sol=sol, override_c=run.override_c)
        lemmas = run_lemma_suite(
            run.p,
            grid_n=run.grids.lemma,
            convexity_n=run.grids.convexity,
            n_pairs=run.grids.zero_minimality_pairs,
            zero_tol=run.zero_tol,
            sol=sol,
        )
        report = verify_all(candidate, run.grid, run.directions, run.num_tol, run.quad_grid)
        report.checks = lemmas.checks + report.checks
        if dump is not None:
            s = np.linspace(-1.0 + DUMP_EDGE_GAP, 1.0 - DUMP_EDGE_GAP, run.grid)
            write_csv(candidate.candidate_table(s), dump)
        write_json(report.model_dump(by_alias=True), run.out)
        return EXIT_OK if report.all_passed else EXIT_VERIFICATION_FAILED

    _run(body)


@cli.command()
def simulate(
    p: float = typer.Option(..., "--p", help="Exponent p >= 2"),
    strategy: Optional[List[StrategyID]] = typer.Option(None, "--strategy", help="Strategy (repeatable)"),
    paths: Optional[int] = typer.Option(None, "--paths", help="Number of paths (>= 1000)"),
    steps: Optional[int] = typer.Option(None, "--steps", help="Number of time steps"),
    t_final: Optional[float] = typer.Option(None, "--t-final", help="Terminal time"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Root seed"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output file (default stdout)"),
    fmt: str = typer.Option("csv", "--format", help="csv or json"),
) -> None:
    """Monte-Carlo estimates of ||W||_p / ||Z||_p, one row per strategy."""

    def body() -> int:
        run = _run_config(
            "simulate",
            p=p,
            strategies=strategy or None,
            n_paths=paths,
            n_steps=steps,
            t_final=t_final,
            seed=seed,
            out=out,
            format=fmt,
        )
        assert run.p is not None
        c_p = compute_sharp_constants(run.p, run.zero_tol).c_p
        rows = []
        for sid in run.strategies:
            # greedy needs p > 2; only an explicit --strategy greedy turns p = 2 into an error
            if sid is StrategyID.GREEDY and not run.p > 2.0 and not strategy:
                log_debug("greedy strategy skipped at p = 2")
                continue
            estimate = run_mc(
                get_strategy(sid, run.p),
                run.p,
                run.n_paths,
                run.n_steps,
                run.t_final,
                run.seed,
                n_batches=run.n_batches,
                brownian=run.brownian,
                heavy_tail_ratio=run.heavy_tail_ratio,
            )
            rows.append({**estimate.model_dump(), "c_p": c_p, "se": estimate.se_ratio})
        if run.format == "json":
            write_json(rows, run.out)
        else:
            write_csv(pd.DataFrame(rows), run.out)
        return EXIT_OK

    _run(body)


if __name__ == "__main__":
    cli()
