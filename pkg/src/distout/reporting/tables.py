"""
CSV result tables.

Every file starts with a block of "# key: value" comment lines echoing the
resolved scenario, followed by a pandas-written table. Floats are written with
17 significant digits so that reading them back is exact.
"""

from __future__ import annotations

import io
import logging
import math

from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import pandas as pd

from pydantic import BaseModel, ConfigDict

from distout.config import settings
from distout.enumerations import ResultColumn, result_columns
from distout.errors import ResultTableError
from distout.exponents import ExponentCurveRow
from distout.sweep import SweepResult


logger = logging.getLogger(__name__)

EXPONENT_KEY_COLUMN = "b"


class ResultTable(BaseModel):
    """A parsed result CSV: its echoed metadata and its data frame."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    path: str
    metadata: dict[str, str]
    frame: pd.DataFrame

    @property
    def key_column(self) -> str:
        return self.frame.columns[0]

    @property
    def is_exponent_table(self) -> bool:
        return self.key_column == EXPONENT_KEY_COLUMN

    @property
    def label(self) -> str:
        return Path(self.path).stem


def _metadata_block(metadata: Iterable[tuple[str, str]]) -> str:
    return "".join(f"# {key}: {value}\n" for key, value in metadata)


def _estimate_cells(estimate) -> list[float]:
    if estimate is None:
        return [math.nan, math.nan, math.nan]
    return [estimate.p_hat, estimate.ci_low, estimate.ci_high]


def sweep_frame(result: SweepResult) -> pd.DataFrame:
    records = [
        [row.snr_db, *_estimate_cells(row.informed), *_estimate_cells(row.separation), row.informed.trials]
        for row in result.rows
    ]
    frame = pd.DataFrame.from_records(records, columns=result_columns)
    return frame.astype({ResultColumn.TRIALS.value: "int64"})


def render_frame(frame: pd.DataFrame, metadata: Iterable[tuple[str, str]]) -> str:
    buffer = io.StringIO()
    buffer.write(_metadata_block(metadata))
    frame.to_csv(
        buffer,
        index=False,
        float_format=settings.CSV_FLOAT_FORMAT,
        lineterminator="\n",
    )
    return buffer.getvalue()


def render_sweep_table(result: SweepResult, metadata: Iterable[tuple[str, str]]) -> str:
    pairs = list(metadata)
    if result.slope_informed is not None:
        pairs.append(("slope_informed", repr(result.slope_informed.slope)))
        pairs.append(("slope_window_db", "%r,%r" % result.slope_informed.window_db))
    if result.slope_separation is not None:
        pairs.append(("slope_separation", repr(result.slope_separation.slope)))
    return render_frame(sweep_frame(result), pairs)


def exponent_frame(rows: Sequence[ExponentCurveRow], input_names: Sequence[str]) -> pd.DataFrame:
    columns = [EXPONENT_KEY_COLUMN, "informed_gaussian"]
    columns += [f"informed_{name}" for name in input_names]
    columns += ["expected_tx", "expected_sep_formula", "expected_sep_oracle"]
    records = [
        [
            row.b,
            row.informed_gaussian,
            *row.informed_discrete,
            row.expected_tx,
            row.expected_sep_formula,
            row.expected_sep_oracle,
        ]
        for row in rows
    ]
    return pd.DataFrame.from_records(records, columns=columns)


def write_table(text: str, path: str | Path) -> Path:
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as e:
        raise ResultTableError(f"Cannot write {path}: {e.strerror}", "TABLE_IO") from e
    logger.info("Wrote %s", path)
    return path


def parse_table(text: str, path: str = "<string>") -> ResultTable:
    metadata = {}
    for line in text.splitlines():
        if not line.startswith("#"):
            break
        key, _, value = line[1:].partition(":")
        metadata[key.strip()] = value.strip()
    try:
        frame = pd.read_csv(io.StringIO(text), comment="#", float_precision="round_trip")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ResultTableError(f"{path}: {e}", "TABLE_PARSE") from e
    columns = list(frame.columns)
    if columns and columns[0] == EXPONENT_KEY_COLUMN:
        pass
    elif columns != result_columns:
        raise ResultTableError(
            f"{path}: unexpected header {columns}", "TABLE_HEADER"
        )
    if not np.all(np.diff(frame[columns[0]].to_numpy()) > 0):
        raise ResultTableError(f"{path}: {columns[0]} is not increasing", "TABLE_ORDER")
    return ResultTable(path=path, metadata=metadata, frame=frame)


def read_table(path: str | Path) -> ResultTable:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ResultTableError(f"Cannot read {path}: {e.strerror}", "TABLE_IO") from e
    return parse_table(text, str(path))
