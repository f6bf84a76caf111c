#!/usr/bin/env python3
"""
Command-line surface: synthesize, simulate, sweep and check time-optimal
cooling protocols. All times are normalized by 1/omega_h unless
--physical is given.
"""

import functools
import logging
import math
import os
from pathlib import Path

import click
from dotenv import load_dotenv

from bounds.asymptotics import power_law_crossover, tau0
from bounds.baseline import salamon_protocol
from bounds.report import (
    fit_time_scaling,
    locate_switching_crossover,
    log_spaced_gammas,
    sweep_bound_reports,
    sweep_optimal_times,
)
from dynamics.errors import (
    CoolingError,
    DomainError,
    InfeasibleScheduleError,
    NumericError,
)
from dynamics.model import NormalizedProblem, PhaseState, PhysicalParams
from dynamics.simulate import (
    casimir_drift,
    endpoint,
    simulate_protocol,
)
from engine.evaluator import Evaluator, target_distance
from engine.evidence import EvidenceCollector
from engine.extremals import candidate_to_protocol
from engine.planner import enumerate_candidates
from oracle.shooting import brute_force_search
from output.writers import (
    ensure_dir,
    final_temperature,
    read_protocol,
    write_bounds_csv,
    write_candidate_table,
    write_json,
    write_json_lines,
    write_protocol,
    write_rows_csv,
    write_run_meta,
    write_trajectory_csv,
)
from propagators.runge_kutta import RungeKuttaPropagator
from settings.loader import apply_overrides, load_settings
from settings.model import DEFAULT_SETTINGS, SolverSettings

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger("cool")

_START = PhaseState(1.0, 0.0)
ORACLE_RTOL = 1e-3


class IOFailure(click.ClickException):
    exit_code = 3


class ComputationFailure(click.ClickException):
    exit_code = 4


class CheckFailure(click.ClickException):
    exit_code = 1


class RunContext:
    """Options shared by every subcommand."""

    def __init__(self, output_dir: Path, settings: SolverSettings, timestamp: bool):
        self.output_dir = output_dir
        self.settings = settings
        self.timestamp = timestamp

    def directory(self) -> Path:
        try:
            return ensure_dir(self.output_dir)
        except OSError as e:
            raise IOFailure(f"Cannot create output directory {self.output_dir}: {e}") from e

    def write_meta(self, command: str, arguments: dict) -> None:
        write_run_meta(self.directory(), command, arguments, self.settings, self.timestamp)


def _guard(func):
    """Map library errors to the CLI exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except click.ClickException:
            raise
        except DomainError as e:
            raise click.UsageError(str(e)) from e
        except OSError as e:
            raise IOFailure(str(e)) from e
        except CoolingError as e:
            logger.error(f"{type(e).__name__}: {e}")
            raise ComputationFailure(str(e)) from e

    return wrapper


def problem_options(func):
    """--gamma, or the physical triple --omega-c/--omega-h/--t-h."""
    func = click.option("--t-h", "t_h", type=float, default=None, help="Bath temperature T_h")(func)
    func = click.option("--omega-h", type=float, default=None, help="Hot trap frequency")(func)
    func = click.option("--omega-c", type=float, default=None, help="Cold trap frequency")(func)
    func = click.option("--gamma", type=float, default=None, help="Frequency ratio sqrt(w_h/w_c) > 1")(func)
    return func


def resolve_problem(
    gamma: float | None,
    omega_c: float | None,
    omega_h: float | None,
    t_h: float | None,
) -> tuple[NormalizedProblem, PhysicalParams]:
    physical = (omega_c, omega_h, t_h)
    if gamma is not None:
        if any(v is not None for v in physical):
            raise click.UsageError("Give either --gamma or --omega-c/--omega-h/--t-h, not both")
        return NormalizedProblem.from_gamma(gamma), PhysicalParams.from_gamma(gamma)

    if omega_c is None or omega_h is None:
        raise click.UsageError("Give --gamma, or both --omega-c and --omega-h")
    params = PhysicalParams(omega_c, omega_h, 1.0 if t_h is None else t_h)
    return NormalizedProblem.from_params(params), params


@click.group()
@click.option(
    "--output-dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Output directory (default $COOLING_OUTPUT_DIR or ./results)",
)
@click.option("--settings", "settings_file", type=click.Path(dir_okay=False), default=None)
@click.option("--set", "overrides", multiple=True, help="Override a setting: key=value")
@click.option("--no-timestamp", is_flag=True, help="Leave the timestamp out of run_meta.json")
@click.option("-v", "--verbose", count=True, help="-v for info, -vv for debug")
@click.pass_context
@_guard
def cli(ctx, output_dir, settings_file, overrides, no_timestamp, verbose):
    """Time-optimal cooling of a quantum parametric oscillator."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    if settings_file:
        try:
            settings = load_settings(settings_file)
        except OSError as e:
            raise IOFailure(f"Cannot read settings {settings_file}: {e}") from e
    else:
        settings = DEFAULT_SETTINGS
    settings = apply_overrides(settings, list(overrides))

    if output_dir is None:
        output_dir = Path(os.getenv("COOLING_OUTPUT_DIR", "results"))
    ctx.obj = RunContext(output_dir, settings, timestamp=not no_timestamp)


@cli.command()
@problem_options
@click.option("--n-max", type=int, default=None, help="Largest n to enumerate")
@click.option("--physical", is_flag=True, help="Also report times in units of 1/omega_h")
@click.pass_obj
@_guard
def solve(run: RunContext, gamma, omega_c, omega_h, t_h, n_max, physical):
    """Synthesize the optimal protocol and the candidate table."""
    prob, params = resolve_problem(gamma, omega_c, omega_h, t_h)
    candidates = enumerate_candidates(prob, n_max, run.settings)
    if not candidates:
        raise ComputationFailure(f"No extremal candidate found for γ={prob.gamma}")
    winner = Evaluator.select_optimal(candidates, run.settings.tie_atol)
    protocol = candidate_to_protocol(winner, prob)

    directory = run.directory()
    write_protocol(protocol, directory / "protocol.json")
    write_candidate_table(candidates, directory / "candidates.json")
    run.write_meta("solve", {"gamma": prob.gamma, "n_max": n_max, "physical": physical})

    click.echo(
        f"γ={prob.gamma:.12g}: optimal {winner.label}, s={winner.s:.12g}, "
        f"total_time={winner.total_time:.12g}"
    )
    if physical:
        samples = simulate_protocol(protocol, _START, run.settings.sample_dt)
        click.echo(f"physical duration {winner.total_time / params.omega_h:.12g}")
        click.echo(
            f"bath temperature {params.T_h:.12g}, "
            f"target temperature {params.cold_temperature:.12g}"
        )
        temperature = final_temperature(samples, params)
        if temperature is not None:
            click.echo(f"final effective temperature {temperature:.12g}")


@cli.command()
@problem_options
@click.option(
    "--protocol",
    "protocol_file",
    type=click.Path(dir_okay=False),
    default=None,
    help="Simulate this protocol JSON instead of the optimal one",
)
@click.option("--sample-dt", type=float, default=None, help="Sampling step (normalized)")
@click.option(
    "--propagator",
    type=click.Choice(["closed-form", "rk4"]),
    default="closed-form",
    show_default=True,
)
@click.option("--physical", is_flag=True, help="Add physical time, frequency and energy columns")
@click.pass_obj
@_guard
def simulate(run: RunContext, gamma, omega_c, omega_h, t_h, protocol_file, sample_dt, propagator, physical):
    """Write the sampled trajectory of a protocol as CSV."""
    settings = run.settings
    if protocol_file:
        try:
            protocol = read_protocol(protocol_file)
        except OSError as e:
            raise IOFailure(f"Cannot read protocol {protocol_file}: {e}") from e
        if any(v is not None for v in (gamma, omega_c, omega_h, t_h)):
            prob, params = resolve_problem(gamma, omega_c, omega_h, t_h)
            if not math.isclose(prob.gamma, protocol.gamma, rel_tol=1e-12):
                raise click.UsageError(
                    f"Protocol was built for γ={protocol.gamma}, "
                    f"the options give γ={prob.gamma}"
                )
        else:
            prob = NormalizedProblem.from_gamma(protocol.gamma)
            params = PhysicalParams.from_gamma(protocol.gamma)
    else:
        prob, params = resolve_problem(gamma, omega_c, omega_h, t_h)
        candidates = enumerate_candidates(prob, settings=settings)
        if not candidates:
            raise ComputationFailure(f"No extremal candidate found for γ={prob.gamma}")
        protocol = candidate_to_protocol(
            Evaluator.select_optimal(candidates, settings.tie_atol), prob
        )

    dt = settings.sample_dt if sample_dt is None else sample_dt
    stepper = RungeKuttaPropagator(dt / 10.0, settings.x1_floor) if propagator == "rk4" else None
    samples = simulate_protocol(protocol, _START, dt, stepper)

    directory = run.directory()
    write_trajectory_csv(samples, directory / "trajectory.csv", params if physical else None)
    run.write_meta(
        "simulate",
        {"gamma": prob.gamma, "sample_dt": dt, "propagator": propagator, "physical": physical},
    )

    rtol = settings.numeric_casimir_rtol if stepper else settings.casimir_rtol
    drift = casimir_drift(samples, params)
    final = samples[-1].state
    click.echo(
        f"{len(samples)} samples, endpoint ({final.x1:.12g}, {final.x2:.12g}), "
        f"casimir drift {drift:.3e} (limit {rtol:.1e})"
    )
    if physical:
        temperature = final_temperature(samples, params)
        if temperature is not None:
            click.echo(f"final effective temperature {temperature:.12g}")


@cli.command()
@click.option("--gamma-min", type=float, required=True)
@click.option("--gamma-max", type=float, required=True)
@click.option("--points", type=int, default=20, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.pass_obj
@_guard
def sweep(run: RunContext, gamma_min, gamma_max, points, workers):
    """Optimal times over log-spaced gamma, with the scaling fit."""
    rows = sweep_optimal_times(gamma_min, gamma_max, points, workers, run.settings)

    directory = run.directory()
    write_rows_csv(rows, directory / "sweep.csv")
    arguments = {"gamma_min": gamma_min, "gamma_max": gamma_max, "points": points}
    if len(rows) >= 2:
        fit = fit_time_scaling(rows)
        write_json(fit.to_dict(), directory / "fit.json")
        click.echo(
            f"slope {fit.slope:.6g} vs τ0 {fit.tau0:.6g} "
            f"({fit.relative_deviation:.2%} off), intercept {fit.intercept:.6g}"
        )
    run.write_meta("sweep", arguments)
    click.echo(f"{len(rows)} rows written to {directory / 'sweep.csv'}")


@cli.command()
@click.option("--gamma", "gammas", type=float, multiple=True, help="Repeat for several values")
@click.option("--gamma-min", type=float, default=None)
@click.option("--gamma-max", type=float, default=None)
@click.option("--points", type=int, default=10, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.pass_obj
@_guard
def bounds(run: RunContext, gammas, gamma_min, gamma_max, points, workers):
    """Exact PLUS extremal at n = N against its large-gamma limit."""
    values = list(gammas)
    if gamma_min is not None or gamma_max is not None:
        if gamma_min is None or gamma_max is None:
            raise click.UsageError("--gamma-min and --gamma-max go together")
        values.extend(log_spaced_gammas(gamma_min, gamma_max, points))
    if not values:
        raise click.UsageError("Give --gamma or --gamma-min/--gamma-max")

    reports = sweep_bound_reports(values, workers, run.settings)

    directory = run.directory()
    write_bounds_csv(reports, directory / "bounds.csv")
    write_json_lines([r.to_dict() for r in reports], directory / "bounds.jsonl")
    run.write_meta("bounds", {"gammas": values})

    for r in reports:
        if r.N is None:
            click.echo(f"γ={r.gamma:.6g}: no integer N in ({r.N_lo:.6g}, {r.N_hi:.6g})")
        else:
            click.echo(
                f"γ={r.gamma:.6g}: N={r.N}, exact {r.exact_time:.10g}, "
                f"limit {r.limiting_time:.10g}, gap {r.relative_gap:.3e}"
            )
    click.echo(f"τ0 = {tau0():.12g}; exponential bound wins beyond τ = {power_law_crossover():.12g}")


@cli.command()
@problem_options
@click.pass_obj
@_guard
def baseline(run: RunContext, gamma, omega_c, omega_h, t_h):
    """The two-segment protocol and its simulated endpoint."""
    prob, params = resolve_problem(gamma, omega_c, omega_h, t_h)
    protocol = salamon_protocol(params.omega_c, params.omega_h)
    final = endpoint(protocol, _START)
    error = target_distance(final, prob)

    directory = run.directory()
    write_json(
        {
            "protocol": protocol.to_dict(),
            "endpoint": {"x1": final.x1, "x2": final.x2},
            "endpoint_error": error,
        },
        directory / "baseline.json",
    )
    run.write_meta("baseline", {"gamma": prob.gamma})
    click.echo(
        f"γ={prob.gamma:.12g}: baseline total_time={protocol.total_time:.12g}, "
        f"endpoint error {error:.3e}"
    )


@cli.command()
@problem_options
@click.option("--n", "n_values", type=int, multiple=True, help="Switching indices to check (default 0 and 1)")
@click.pass_obj
@_guard
def verify(run: RunContext, gamma, omega_c, omega_h, t_h, n_values):
    """Re-check the synthesized candidates and compare with the brute-force oracle."""
    prob, _ = resolve_problem(gamma, omega_c, omega_h, t_h)
    settings = run.settings
    collector = EvidenceCollector()
    candidates = enumerate_candidates(prob, settings=settings, collector=collector)

    for n in n_values or (0, 1):
        subject = f"γ={prob.gamma:.12g} n={n}"
        analytic = [c.total_time for c in candidates if c.n == n]
        try:
            result = brute_force_search(prob, n, settings.endpoint_atol, settings)
        except InfeasibleScheduleError as e:
            collector.add_check("oracle", subject, not analytic, error_message=str(e))
            continue
        except NumericError as e:
            collector.add_check("oracle", subject, False, error_message=str(e))
            continue

        if not analytic:
            collector.add_check(
                "oracle",
                subject,
                False,
                measured=result.total_time,
                error_message="oracle found a schedule with no analytic counterpart",
            )
            continue

        best = min(analytic)
        gap = (result.total_time - best) / best
        collector.add_check(
            "oracle",
            subject,
            math.fabs(gap) <= ORACLE_RTOL,
            measured=gap,
            threshold=ORACLE_RTOL,
            details={"oracle_time": result.total_time, "analytic_time": best},
        )

    directory = run.directory()
    write_json([e.to_dict() for e in collector.evidence_list], directory / "verify.json")
    run.write_meta("verify", {"gamma": prob.gamma, "n": list(n_values or (0, 1))})

    for item in collector.evidence_list:
        status = "PASS" if item.passed else "FAIL"
        click.echo(f"[{status}] {item.check} {item.subject}: {item.summary()}")
    if not collector.all_passed():
        raise CheckFailure(f"{len(collector.get_failed_checks())} check(s) failed")
    click.echo(f"All {len(collector.evidence_list)} checks passed")


@cli.command()
@click.option("--gamma-lo", type=float, default=1.5, show_default=True)
@click.option("--gamma-hi", type=float, default=100.0, show_default=True)
@click.pass_obj
@_guard
def crossover(run: RunContext, gamma_lo, gamma_hi):
    """The gamma above which three or more switchings beat one."""
    gamma = locate_switching_crossover(gamma_lo, gamma_hi, settings=run.settings)
    directory = run.directory()
    write_json(
        {"gamma_lo": gamma_lo, "gamma_hi": gamma_hi, "crossover_gamma": gamma},
        directory / "crossover.json",
    )
    run.write_meta("crossover", {"gamma_lo": gamma_lo, "gamma_hi": gamma_hi})
    if gamma is None:
        click.echo(f"No crossover on [{gamma_lo}, {gamma_hi}]")
    else:
        click.echo(f"Multi-switching protocols win above γ ≈ {gamma:.10g}")


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
