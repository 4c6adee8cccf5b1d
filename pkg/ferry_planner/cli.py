# ferry_planner/cli.py

from __future__ import annotations

import functools
import json
import logging
from pathlib import Path

import click

from ferry_planner import __version__
from ferry_planner.config import Config
from ferry_planner.core.activity_logger import ActivityLogger
from ferry_planner.core.branch_and_bound import solve_milp
from ferry_planner.core.dispatch_simulator import DispatchSimulator
from ferry_planner.core.errors import FerryPlannerError
from ferry_planner.core.experiment_runner import EXPERIMENT_IDS, ExperimentError, ExperimentRunner
from ferry_planner.core.linearizer import LinearizationError
from ferry_planner.core.model_builder import MODES, ModelBuilder, ModelError
from ferry_planner.core.mps_io import MpsFormatError, MpsIO
from ferry_planner.core.report_generator import ReportGenerator
from ferry_planner.core.scenario_manager import ScenarioError, ScenarioManager
from ferry_planner.core.solution_store import SolutionFileError, SolutionStore
from ferry_planner.models.solution import BnbConfig
from ferry_planner.utils.helpers import format_kusd, parse_float_list, parse_id_list, resolve_bundle

logger = logging.getLogger("ferry_planner.cli")

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_LIMIT = 2
EXIT_INPUT = 3

INPUT_ERRORS = (ScenarioError, ModelError, LinearizationError, MpsFormatError, SolutionFileError)

STATUS_EXIT = {
    "optimal": EXIT_OK,
    "limit_incumbent": EXIT_LIMIT,
    "infeasible": EXIT_INFEASIBLE,
    "unbounded": EXIT_INFEASIBLE,
    "limit_no_incumbent": EXIT_INFEASIBLE,
}


def _handle_errors(func):
    """Map planner errors onto exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except INPUT_ERRORS as e:
            click.echo(f"error: {e}", err=True)
            ctx.exit(EXIT_INPUT)
        except (ExperimentError, FerryPlannerError) as e:
            click.echo(f"error: {e}", err=True)
            ctx.exit(EXIT_INFEASIBLE)
        except ValueError as e:
            click.echo(f"error: {e}", err=True)
            ctx.exit(EXIT_INPUT)

    return wrapper


def _load(bundle: str):
    s = ScenarioManager.load(resolve_bundle(bundle, Config.BUNDLE_DIR))
    ActivityLogger.log_run_event("scenario_loaded", s.name, bundle, hash=s.source_hash)
    return s


def _bnb_config(ctx, gap=None, time_limit=None) -> BnbConfig:
    return BnbConfig.from_config(
        gap_tolerance=gap,
        time_limit=time_limit,
        workers=ctx.obj.get("workers"),
        lp_engine=ctx.obj.get("lp_engine"),
    )


def _model_for(s, experiment, mode):
    if experiment is not None:
        return ExperimentRunner.experiment_model(s, experiment, mode=mode)
    return ModelBuilder.build_model(s, mode=mode)


# ---------------------------------------------------------
# Command group
# ---------------------------------------------------------
@click.group()
@click.version_option(__version__, prog_name="ferry-planner")
@click.option("--workers", type=int, default=None, help="Threads evaluating node LPs.")
@click.option("--lp-engine", type=click.Choice(["auto", "native", "highs"]), default=None)
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR.")
@click.pass_context
def cli(ctx, workers, lp_engine, log_level):
    """Joint scheduling, battery sizing and charging infrastructure planning for electric ferries."""
    ActivityLogger.configure(log_level or Config.LOG_LEVEL)
    ctx.ensure_object(dict)
    ctx.obj.update({"workers": workers, "lp_engine": lp_engine})


@cli.command()
@click.argument("bundle")
@_handle_errors
def validate(bundle):
    """Load a bundle and list its data violations."""
    s = _load(bundle)
    violations = ScenarioManager.validate(s)
    for v in violations:
        click.echo(str(v))
    if violations:
        click.echo(f"{len(violations)} violation(s) in '{s.name}'", err=True)
        click.get_current_context().exit(EXIT_INPUT)
    click.echo(f"'{s.name}' is valid: {len(s.ports)} port(s), {len(s.vessels)} vessel(s), "
               f"{len(s.all_legs())} leg(s), {s.grid.periods} periods")


@cli.command()
@click.argument("bundle")
@click.option("--experiment", type=click.IntRange(1, 4), default=None, help="Experiment rung 1-4.")
@click.option("--gap", type=float, default=None, help="Relative gap tolerance.")
@click.option("--time-limit", type=float, default=None, help="Seconds.")
@click.option("--mode", type=click.Choice(MODES), default="candidates")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None, help="Solution file to write.")
@click.pass_context
@_handle_errors
def solve(ctx, bundle, experiment, gap, time_limit, mode, output):
    """Solve one model and optionally write its solution file."""
    s = _load(bundle)
    m = _model_for(s, experiment, mode)
    sol = solve_milp(m, _bnb_config(ctx, gap, time_limit))
    click.echo(json.dumps(sol.to_dict(), indent=2))
    if output and sol.has_incumbent:
        SolutionStore.write_solution(sol, output)
        click.echo(f"solution written to {output}")
    ctx.exit(STATUS_EXIT.get(sol.status, EXIT_INFEASIBLE))


@cli.command("export-mps")
@click.argument("bundle")
@click.option("--experiment", type=click.IntRange(1, 4), default=None)
@click.option("--mode", type=click.Choice(MODES), default="candidates")
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True)
@_handle_errors
def export_mps(bundle, experiment, mode, output):
    """Write the model as fixed-format MPS."""
    s = _load(bundle)
    m = _model_for(s, experiment, mode)
    path = MpsIO.export_mps(m, output)
    click.echo(f"{m.n_rows} rows, {m.n_cols} columns written to {path}")


@cli.command()
@click.argument("bundle")
@click.option("-o", "--output", type=click.Path(file_okay=False), required=True)
@click.option("--ids", default=None, help="Comma separated experiment ids, default 1,2,3,4.")
@click.option("--gap", type=float, default=None)
@click.option("--time-limit", type=float, default=None)
@click.option("--parallel", is_flag=True, help="Run experiments concurrently.")
@click.pass_context
@_handle_errors
def experiments(ctx, bundle, output, ids, gap, time_limit, parallel):
    """Run the experiment ladder and write the summary report."""
    s = _load(bundle)
    cfg = _bnb_config(ctx, gap, time_limit)
    results = ExperimentRunner.run_experiments(
        s, parse_id_list(ids, EXPERIMENT_IDS), cfg, parallel=parallel, diagnostics_dir=Path(output) / "diagnostics",
    )
    ReportGenerator.emit_report(results, output, scenario=s, cfg=cfg)
    header, rows = ReportGenerator.summary_table(results)
    click.echo(ReportGenerator.format_text_table(header, rows), nl=False)
    worst = max((STATUS_EXIT.get(r.status, EXIT_INFEASIBLE) for r in results), default=EXIT_OK)
    ctx.exit(worst)


@cli.command()
@click.argument("bundle")
@click.argument("solution_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(file_okay=False), required=True)
@_handle_errors
def replay(bundle, solution_file, output):
    """Replay a solution file, check it and write trace CSVs."""
    s = _load(bundle)
    sol = SolutionStore.read_solution(solution_file)
    trace = DispatchSimulator.replay(s, sol)
    violations = DispatchSimulator.check(trace, s)
    DispatchSimulator.export_traces(trace, s, output)
    costs = DispatchSimulator.recompute_cost(trace, s)
    click.echo(f"recomputed total cost {format_kusd(costs.total)} (solution objective {sol.objective:.6f})")
    for v in violations:
        click.echo(str(v))
    if violations:
        click.echo(f"{len(violations)} violation(s)", err=True)
        click.get_current_context().exit(EXIT_INFEASIBLE)


@cli.command()
@click.argument("bundle")
@click.option("--experiment", type=click.IntRange(1, 4), default=4)
@click.option("--factors", default="0.5,1,1.5", help="Comma separated price factors.")
@click.option("-o", "--output", type=click.Path(file_okay=False), required=True)
@click.option("--gap", type=float, default=None)
@click.pass_context
@_handle_errors
def sensitivity(ctx, bundle, experiment, factors, output, gap):
    """Re-solve one experiment with every price series scaled."""
    s = _load(bundle)
    cfg = _bnb_config(ctx, gap)
    pairs = ExperimentRunner.run_sensitivity(s, experiment, parse_float_list(factors), cfg)
    results = [r for _, r in pairs]
    ReportGenerator.emit_report(results, output, scenario=s, cfg=cfg)
    for factor, r in pairs:
        click.echo(f"x{factor:g}: total {format_kusd(r.costs.total)}, "
                   f"grid {r.grid_power}, storage {r.storage_energy}, PV {r.pv_power}")


@cli.command()
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
def serve(host, port):
    """Run the HTTP API."""
    from ferry_planner.app import create_app

    create_app().run(host=host or Config.API_HOST, port=port or Config.API_PORT, debug=Config.DEBUG)


def main():
    cli(obj={})


if __name__ == "__main__":
    main()
