from __future__ import annotations  # noqa: INP001

import math
from typing import TYPE_CHECKING

import pytest

from sagnacsim.__main__ import cli
from sagnacsim.tomo import read_count_file
from tests.testutils import cli_invoke, read_csv_text, tmp_path_cwd

if TYPE_CHECKING:
    from pathlib import Path

    from click.testing import CliRunner

######################################################################
# Tests


def test_tomo_sim_state(runner: CliRunner, caplog: pytest.LogCaptureFixture, tmp_path: Path) -> None:  # noqa: D103
    # Simulate and reconstruct a named two-qubit state
    # Files output: counts.txt
    # Configuration file: None

    cli_args: list[str | Path] = ["tomo-sim", "--state", "theta1", "--mc-resamples", "3", "--seed", "5", "-o", "counts.txt"]

    with tmp_path_cwd(tmp_path) as runner_cwd:
        result = cli_invoke(cli, cli_args, runner, caplog)

        records = read_count_file(runner_cwd / "counts.txt")

    df = read_csv_text(result.stdout)

    assert list(df.columns) == ["quantity", "value", "mc_mean", "mc_std"]
    assert list(df["quantity"]) == ["purity", "concurrence", "fidelity"]

    values = {quantity: float(value) for quantity, value in zip(df["quantity"], df["value"], strict=True)}
    assert values["fidelity"] > 0.99
    assert values["concurrence"] == pytest.approx(math.sqrt(3) / 2, abs=0.05)
    assert all(float(std) >= 0 for std in df["mc_std"])

    assert len(records) == 36
    assert all(record.exposure == 10_000 for record in records)


def test_tomo_sim_counts(runner: CliRunner, caplog: pytest.LogCaptureFixture, tmp_path: Path) -> None:  # noqa: D103
    # Reconstruct from a count file written by an earlier run
    # Files output: counts.txt
    # Configuration file: None

    with tmp_path_cwd(tmp_path):
        simulated = cli_invoke(cli, ["tomo-sim", "--state", "h", "--mc-resamples", "2", "-o", "counts.txt"], runner, caplog)
        result = cli_invoke(cli, ["tomo-sim", "--counts", "counts.txt", "--mc-resamples", "2"], runner, caplog)

    simulated_df = read_csv_text(simulated.stdout)
    df = read_csv_text(result.stdout)

    # No reference state, no fidelity; one qubit, no concurrence.
    assert list(simulated_df["quantity"]) == ["purity", "fidelity"]
    assert list(df["quantity"]) == ["purity"]

    # Same counts and seed give the same reconstruction.
    assert df["value"][0] == simulated_df["value"][0]


def test_tomo_sim_no_input(runner: CliRunner, caplog: pytest.LogCaptureFixture) -> None:  # noqa: D103
    cli_args: list[str | Path] = ["tomo-sim"]

    result = cli_invoke(cli, cli_args, runner, caplog, expected_exit_code=2)

    assert "Use '--state' to simulate counts or '--counts' to read them." in result.stderr


def test_tomo_sim_mismatch(runner: CliRunner, caplog: pytest.LogCaptureFixture, tmp_path: Path) -> None:  # noqa: D103
    # Reference state does not match the qubit count of the count file
    # Files output: counts.txt
    # Configuration file: None

    with tmp_path_cwd(tmp_path):
        cli_invoke(cli, ["tomo-sim", "--state", "plus", "--mc-resamples", "2", "-o", "counts.txt"], runner, caplog)
        result = cli_invoke(cli, ["tomo-sim", "--state", "bell", "--counts", "counts.txt"], runner, caplog, expected_exit_code=2)

    assert "does not match the 1-qubit counts" in result.stderr


def test_tomo_sim_bad_state(runner: CliRunner, caplog: pytest.LogCaptureFixture) -> None:  # noqa: D103
    cli_args: list[str | Path] = ["tomo-sim", "--state", "ghz"]

    result = cli_invoke(cli, cli_args, runner, caplog, expected_exit_code=2)

    assert "--state" in result.stderr


def test_tomo_sim_empty_counts(runner: CliRunner, caplog: pytest.LogCaptureFixture, tmp_path: Path) -> None:  # noqa: D103
    # Count file with a header and no records
    # Files output: None
    # Configuration file: None

    cli_args: list[str | Path] = ["tomo-sim", "--counts", "counts.txt"]

    with tmp_path_cwd(tmp_path) as runner_cwd:
        (runner_cwd / "counts.txt").write_text("exposure=1000\n")

        result = cli_invoke(cli, cli_args, runner, caplog, expected_exit_code=2)

    assert "--counts" in result.stderr
    assert "No count records." in result.stderr
