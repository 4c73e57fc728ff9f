from __future__ import annotations

import importlib.metadata
import logging
import math
import sys
import typing
from pathlib import Path
from typing import TYPE_CHECKING

import click
from click.core import ParameterSource
from click_option_group import optgroup

from .checks import channel_check
from .configtypes import SweepConfigFileT
from .jinja import render_output_path
from .measures import concurrence_two_qubit
from .shared import (
    SagnacSimConfigError,
    SagnacSimRuntimeError,
    SagnacSimValueError,
    format_number,
    read_config_file,
    resolve_rel_path,
    validate_config_typed_dict,
)
from .statealg import density_from_pure, ket, maximally_mixed, mix, purity, theta1, theta2, two_qubit_state
from .sweep import run_sweep, write_sweep_csv, write_sweep_xls
from .tomo import (
    fidelity_with,
    mle_reconstruct,
    monte_carlo_statistics,
    read_count_file,
    settings_for_qubits,
    simulate_counts,
    write_count_file,
)

if TYPE_CHECKING:
    from collections.abc import Callable

    from .statealg import DensityMatrix
    from .tomo import StatisticT


VERBOSE_LOGGING_LEVELS = (
    logging.ERROR,  # default
    logging.WARNING,  # -v
    logging.INFO,  # -vv
    logging.DEBUG,  # -vvv
)

LOGGING_FORMAT = "[%(levelname)s] %(message)s"

# Reference version number in pyproject.toml
# (For unexplained reasons, will change "-dev" suffix to "-dev0".)
__version__ = importlib.metadata.version("sagnacsim")

# Setup logging
# Runtime verbose level will be set in cli()
logging.basicConfig(level=VERBOSE_LOGGING_LEVELS[0], format=LOGGING_FORMAT)

DEFAULT_CONFIG_NAME = "sagnacsim.yaml"
DEFAULT_EXPOSURE = 10_000.0
DEFAULT_MC_RESAMPLES = 20

# Weight of the pure state in the "mixed" named states.
MIXED_PURE_FRACTION = 0.9

# Named states of `tomo-sim`.
NAMED_STATES: dict[str, Callable[[], DensityMatrix]] = {
    "theta1": lambda: density_from_pure(theta1()),
    "theta2": lambda: density_from_pure(theta2()),
    "bell": lambda: density_from_pure(two_qubit_state(1 / math.sqrt(2), 1 / math.sqrt(2))),
    "h": lambda: density_from_pure(ket("H")),
    "plus": lambda: density_from_pure(ket("+")),
    "mixed1": lambda: mix(density_from_pure(theta1()), maximally_mixed((2, 2)), MIXED_PURE_FRACTION),
    "mixed2": lambda: mix(density_from_pure(theta2()), maximally_mixed((2, 2)), MIXED_PURE_FRACTION),
}

# Use a named logger instead of root logger
logger = logging.getLogger("sagnacsim")


######################################################################
# Helper functions


def _opt_config_file_callback(ctx: click.Context, param: click.Option, value: Path) -> Path:  # noqa: ARG001
    """Handle `--config` command option.

    Args:
        ctx (click.core.Context): Click context object.
        param (click.Option): Click option object.
        value (Path): Option value.

    Returns:
        Path: Option value.
    """
    assert value is not None
    assert ctx.default_map is None

    ctx.default_map = {"_config_file": value}  # Capture for error reporting

    if not value.is_file():
        raise SagnacSimConfigError(f"'{value}': No such file.")

    try:
        config = read_config_file(value)
    except SagnacSimConfigError as err:
        raise SagnacSimConfigError(f"Failed to read config file {value}: {err}") from err
    else:
        if config:
            ctx.default_map.update(config)

    return value


def _write_quantities(quantities: dict[str, tuple[float | None, float | None, float | None]]) -> None:
    """Print `quantity,value,mc_mean,mc_std` CSV to standard output."""
    click.echo("quantity,value,mc_mean,mc_std")
    for name, values in quantities.items():
        click.echo(",".join([name, *(format_number(v) for v in values)]))


######################################################################
# Main


@click.group()
@click.option(
    "--verbose",
    "-v",
    count=True,
    help="Be more verbose; can specify more than once.",
)
@click.version_option(
    version=__version__,
    prog_name="sagnacsim",
    message="%(prog)s version %(version)s",
)
def cli(verbose: int) -> None:
    """Simulate qubit decoherence channels, entanglement dynamics and photon-count tomography."""
    # Adjust logging level
    loglevel = VERBOSE_LOGGING_LEVELS[min(verbose, len(VERBOSE_LOGGING_LEVELS) - 1)]
    logging.getLogger().setLevel(loglevel)

    logger.debug(f"Working directory: '{Path.cwd()}'")


######################################################################
# sweep


@cli.command()
@click.option(
    "--config",
    "-c",
    default=DEFAULT_CONFIG_NAME,
    type=click.Path(
        exists=False,  # validate ourself to keep error message consistent
        dir_okay=False,
        path_type=Path,
        resolve_path=False,
    ),
    callback=_opt_config_file_callback,
    is_eager=True,
    expose_value=False,
    show_default=True,
    help="Read sweep configuration from FILE.",
)
@optgroup.group("OVERRIDES")
@optgroup.option(
    "--output",
    "-o",
    type=click.Path(
        exists=False,
        dir_okay=False,
        path_type=Path,
        resolve_path=False,
    ),
    default=None,
    help="Write CSV to FILE. [default: standard output]",
)
@optgroup.option(
    "--seed",
    type=int,
    default=None,
    help="Random seed of the noisy pipeline.",
)
@optgroup.option(
    "--exposure",
    type=click.FloatRange(min=0, min_open=True),
    default=None,
    help="Expected counts per setting; enables the noisy pipeline.",
)
@optgroup.option(
    "--p-points",
    type=click.IntRange(min=2),
    default=None,
    help="Number of grid points.",
)
@optgroup.option(
    "--mc-resamples",
    type=click.IntRange(min=2),
    default=None,
    help="Monte-Carlo resamples per row.",
)
@optgroup.option(
    "--xls-file",
    type=click.Path(
        exists=False,
        dir_okay=False,
        path_type=Path,
        resolve_path=False,
    ),
    default=None,
    help="Also write rows to an Excel workbook.",
)
@click.pass_context
def sweep(  # noqa: PLR0913
    ctx: click.Context,
    output: Path | None,  # noqa: ARG001
    seed: int | None,  # noqa: ARG001
    exposure: float | None,  # noqa: ARG001
    p_points: int | None,  # noqa: ARG001
    mc_resamples: int | None,  # noqa: ARG001
    xls_file: Path | None,  # noqa: ARG001
) -> None:
    """Run a configured parameter sweep and write one CSV row per grid point.

    Command line options override configuration file directives.
    Relative paths are resolved against the configuration file directory.
    """
    # Options set in configuration file, set by `_opt_config_file_callback`
    config = typing.cast("SweepConfigFileT", dict(ctx.default_map or {}))

    config_file: Path | None = config.get("_config_file")

    # Error handling expects this key to be present
    assert config_file is not None

    logger.debug(f"Sweep config file: '{config_file.resolve()}'")

    # Command line options override config file options (if any)
    for param, param_value in ctx.params.items():
        if ctx.get_parameter_source(param) == ParameterSource.COMMANDLINE:
            config[param] = param_value

    # This will catch common configuration issues early on, e.g. unrecognized or missing required keys.
    validate_config_typed_dict(config, SweepConfigFileT, config, [])

    config_dir = config_file.parent

    for directive in ("output", "xls_file"):
        path = config.get(directive)
        if path:
            path = render_output_path(Path(path), config, directive)
            config[directive] = resolve_rel_path(path, config_dir)

    sweep_config, rows = run_sweep(config)

    write_sweep_csv(rows, sweep_config.output)

    if sweep_config.xls_file is not None:
        write_sweep_xls(rows, sweep_config.xls_file, sweep_config.scenario.value)

    # Click's CliRunner.invoke doesn't capture stdout from logging
    # https://github.com/pallets/click/issues/2647
    sys.stderr.flush()


######################################################################
# check


@cli.command()
def check() -> None:
    """Run the channel invariant suite and print `invariant,status,max_deviation` CSV.

    Exits with status 1 if any invariant fails.
    """
    results = channel_check()

    click.echo("invariant,status,max_deviation")
    for result in results:
        click.echo(f"{result.name},{'pass' if result.passed else 'fail'},{format_number(result.max_deviation)}")

    failed = [result.name for result in results if not result.passed]

    sys.stderr.flush()

    if failed:
        raise SagnacSimRuntimeError(f"{len(failed)} of {len(results)} invariants failed: {', '.join(failed)}")


######################################################################
# tomo-sim


@cli.command("tomo-sim")
@click.option(
    "--state",
    "state_name",
    type=click.Choice(sorted(NAMED_STATES)),
    default=None,
    help="State to simulate; also the reference for fidelity.",
)
@click.option(
    "--exposure",
    type=click.FloatRange(min=0, min_open=True),
    default=DEFAULT_EXPOSURE,
    show_default=True,
    help="Expected counts per setting.",
)
@click.option(
    "--seed",
    type=int,
    default=0,
    show_default=True,
    help="Random seed.",
)
@click.option(
    "--mc-resamples",
    type=click.IntRange(min=2),
    default=DEFAULT_MC_RESAMPLES,
    show_default=True,
    help="Monte-Carlo resamples for error bars.",
)
@click.option(
    "--output",
    "-o",
    type=click.Path(exists=False, dir_okay=False, path_type=Path, resolve_path=False),
    default=None,
    help="Write the simulated counts to FILE.",
)
@click.option(
    "--counts",
    "counts_file",
    type=click.Path(exists=True, dir_okay=False, path_type=Path, resolve_path=False),
    default=None,
    help="Reconstruct from a count FILE instead of simulating.",
)
@click.pass_context
def tomo_sim(  # noqa: PLR0913
    ctx: click.Context,
    state_name: str | None,
    exposure: float,
    seed: int,
    mc_resamples: int,
    output: Path | None,
    counts_file: Path | None,
) -> None:
    """Simulate tomography counts of a named state and reconstruct it by maximum likelihood.

    Prints `quantity,value,mc_mean,mc_std` CSV: the reconstructed value and its Monte-Carlo mean and standard deviation.
    """
    truth = NAMED_STATES[state_name]() if state_name else None

    if counts_file is not None:
        try:
            records = read_count_file(counts_file)
        except SagnacSimValueError as err:
            raise click.BadParameter(str(err), ctx=ctx, param_hint="'--counts'") from err
    elif truth is not None:
        records = simulate_counts(truth, settings_for_qubits(len(truth.layout)), exposure, seed)
    else:
        ctx.fail("Use '--state' to simulate counts or '--counts' to read them.")

    if output is not None:
        write_count_file(output, records)

    dim = 2 ** len(records[0].label)
    if truth is not None and truth.dim != dim:
        ctx.fail(f"State '{state_name}' does not match the {len(records[0].label)}-qubit counts.")

    statistics: dict[str, StatisticT] = {"purity": purity}
    if dim == 4:
        statistics["concurrence"] = lambda rho: concurrence_two_qubit(rho)[0]
    if truth is not None:
        statistics["fidelity"] = fidelity_with(truth)

    result = mle_reconstruct(records, dim, seed=seed)
    if not result.converged:
        logger.warning(f"Reconstruction did not converge after {result.iterations} iterations")

    estimates = monte_carlo_statistics(records, mc_resamples, statistics, seed, dim=dim)

    _write_quantities({name: (statistic(result.rho), *estimates[name]) for name, statistic in statistics.items()})

    sys.stderr.flush()


######################################################################
# version


@cli.command()
def version() -> None:
    """Print the version."""
    click.echo(f"sagnacsim version {__version__}")


if __name__ == "__main__":
    sys.exit(cli())
