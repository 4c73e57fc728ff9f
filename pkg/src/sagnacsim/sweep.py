from __future__ import annotations

import io
import logging
from typing import TYPE_CHECKING

import click
import pandas as pd
from openpyxl.utils.cell import get_column_letter

from .scenario import Scenario, SweepConfig, row_columns

# Import all scenario classes so they register themselves with `register_scenario`.
from .scenario_monitor import ScenarioDistillation  # noqa: F401
from .scenario_single import ScenarioComplementaritySingle  # noqa: F401
from .scenario_tomo import ScenarioTomoDemo  # noqa: F401
from .scenario_twoqubit import ScenarioESD  # noqa: F401
from .shared import SagnacSimRuntimeError, format_number

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from .configtypes import SweepConfigFileT
    from .scenario import SweepRow

# Maximum worksheet column width, in characters.
XLS_MAX_COLUMN_WIDTH = 24

# Use a named logger instead of root logger
logger = logging.getLogger("sagnacsim")


######################################################################
# Helper functions


def _rows_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    """Rows as a frame of formatted strings; absent fields are empty."""
    columns = row_columns(rows)

    return pd.DataFrame(
        [[format_number(row.get(column)) for column in columns] for row in rows],
        columns=columns,
        dtype=str,
    )


######################################################################
# Module public


def run_sweep(config: SweepConfigFileT) -> tuple[SweepConfig, list[SweepRow]]:
    """Run the configured scenario over its grid.

    Args:
        config (SweepConfigFileT): Validated configuration directives, command line options merged.

    Returns:
        tuple[SweepConfig, list[SweepRow]]: Parsed configuration and rows ordered by grid point.
    """
    sweep_config = SweepConfig.from_config(config)

    scenario_cls = Scenario.get_scenario_class(sweep_config.scenario)
    scenario = scenario_cls(sweep_config, config)

    return sweep_config, scenario.run()


def format_sweep_csv(rows: Sequence[SweepRow]) -> str:
    """Render rows as CSV text.

    Args:
        rows (Sequence[SweepRow]): Rows.

    Returns:
        str: Header naming the fields present, one line per row, "\\n" line endings.
    """
    buffer = io.StringIO()
    _rows_frame(rows).to_csv(buffer, index=False, lineterminator="\n")

    return buffer.getvalue()


def write_sweep_csv(rows: Sequence[SweepRow], path: Path | None) -> None:
    """Write rows as CSV.

    Args:
        rows (Sequence[SweepRow]): Rows.
        path (Path | None): Output file; standard output if None.

    Raises:
        SagnacSimRuntimeError: Output is not writable.
    """
    text = format_sweep_csv(rows)

    if path is None:
        click.echo(text, nl=False)
        return

    try:
        with path.open("w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as err:
        raise SagnacSimRuntimeError(f"'{path}': {err.strerror or err}") from err

    logger.info(f"Wrote {len(rows)} rows to '{path}'")


def read_sweep_csv(path: Path) -> list[SweepRow]:
    """Read rows written by `write_sweep_csv`; empty fields are absent.

    Args:
        path (Path): CSV file.

    Returns:
        list[SweepRow]
    """
    df = pd.read_csv(path, dtype=str, keep_default_na=False)

    return [{column: float(value) for column, value in record.items() if value != ""} for record in df.to_dict("records")]


def write_sweep_xls(rows: Sequence[SweepRow], path: Path, sheet_name: str) -> None:
    """Write rows to a worksheet, replacing a sheet of the same name in an existing workbook.

    Args:
        rows (Sequence[SweepRow]): Rows.
        path (Path): Workbook file.
        sheet_name (str): Worksheet name.

    Raises:
        SagnacSimRuntimeError: Workbook is not writable.
    """
    columns = row_columns(rows)
    df = pd.DataFrame([[row.get(column) for column in columns] for row in rows], columns=columns, dtype=float)

    writer_opts = {}

    if path.is_file():
        # Keep the other sheets of an existing workbook.
        writer_opts["mode"] = "a"
        writer_opts["if_sheet_exists"] = "replace"

    logger.debug(f"Writing workbook '{path.name}'...")

    try:
        with pd.ExcelWriter(path, engine="openpyxl", **writer_opts) as writer:
            df.to_excel(writer, sheet_name=sheet_name, index=False, freeze_panes=(1, 0))

            ws = writer.sheets[sheet_name]
            for idx, column in enumerate(columns, start=1):
                ws.column_dimensions[get_column_letter(idx)].width = min(max(len(column), 12) + 2, XLS_MAX_COLUMN_WIDTH)
    except OSError as err:
        raise SagnacSimRuntimeError(f"'{path}': {err.strerror or err}") from err

    logger.info(f"Wrote {len(rows)} rows to sheet '{sheet_name}' of '{path}'")
