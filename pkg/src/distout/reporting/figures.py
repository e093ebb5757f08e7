"""
Static SVG line plots of result tables, rendered from a Jinja2 template.

Outage tables (first column snr_db) get a log10 probability axis; exponent
tables (first column b) get a linear axis. Output is byte-deterministic.
"""

from __future__ import annotations

import logging
import math

from pathlib import Path
from typing import Sequence

import numpy as np

from jinja2 import Environment, PackageLoader, StrictUndefined
from pydantic import BaseModel, ConfigDict

from distout.config import settings
from distout.enumerations import probability_columns
from distout.errors import FigureError
from distout.reporting.tables import ResultTable


logger = logging.getLogger(__name__)

PALETTE = [
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#17becf",
]
DASHES = ["", "6 3"]

MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 190, 40, 55

environment = Environment(
    loader=PackageLoader("distout.reporting", "templates"),
    autoescape=True,
    undefined=StrictUndefined,
    keep_trailing_newline=True,
    trim_blocks=True,
    lstrip_blocks=True,
)


class Series(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    x: tuple[float, ...]
    y: tuple[float, ...]


class Tick(BaseModel):
    model_config = ConfigDict(frozen=True)

    position: str
    label: str


def collect_series(tables: Sequence[ResultTable]) -> tuple[list[Series], bool]:
    """One series per (file, plotted column); also reports whether y is logarithmic."""
    if not tables:
        raise FigureError("At least one table is required", "FIGURE_NO_INPUT")
    kinds = {table.is_exponent_table for table in tables}
    if len(kinds) > 1:
        raise FigureError("Cannot mix outage and exponent tables", "FIGURE_MIXED")
    exponent = kinds.pop()
    reference = tables[0].frame.iloc[:, 0].to_numpy()
    series = []
    for table in tables:
        frame = table.frame
        if len(frame) < 2:
            raise FigureError(f"{table.path} has fewer than two rows", "FIGURE_TOO_FEW_ROWS")
        x = frame.iloc[:, 0].to_numpy()
        if x.shape != reference.shape or not np.array_equal(x, reference):
            raise FigureError(
                f"{table.path} uses a different {frame.columns[0]} grid", "FIGURE_GRID_MISMATCH"
            )
        columns = list(frame.columns[1:]) if exponent else probability_columns
        for column in columns:
            y = frame[column].to_numpy(dtype=float)
            if np.all(np.isnan(y)):
                continue
            series.append(
                Series(
                    label=f"{table.label} {column}",
                    x=tuple(float(value) for value in x),
                    y=tuple(float(value) for value in y),
                )
            )
    if not series:
        raise FigureError("No plottable columns", "FIGURE_EMPTY")
    return series, not exponent


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _tick_label(value: float) -> str:
    return f"{value:g}"


def render_svg(
    tables: Sequence[ResultTable], title: str | None = None
) -> str:
    series, logarithmic = collect_series(tables)
    width, height = settings.FIGURE_WIDTH, settings.FIGURE_HEIGHT
    plot_w = width - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = height - MARGIN_TOP - MARGIN_BOTTOM

    x_values = np.asarray(series[0].x)
    x_min, x_max = float(x_values.min()), float(x_values.max())
    finite = [
        value
        for line in series
        for value in line.y
        if math.isfinite(value) and (value > 0 or not logarithmic)
    ]
    if not finite:
        raise FigureError("Every value is zero or missing", "FIGURE_EMPTY")
    if logarithmic:
        y_low = math.floor(math.log10(min(finite)))
        y_high = max(0, math.ceil(math.log10(max(finite))))
        if y_high == y_low:
            y_low -= 1
        to_axis = math.log10
        y_ticks = [(float(k), f"1e{k}") for k in range(y_low, y_high + 1)]
    else:
        y_low, y_high = 0.0, max(finite) * 1.05 or 1.0
        to_axis = float
        step = max(1.0, 10 ** math.floor(math.log10(y_high)) / 2)
        y_ticks = [(k * step, _tick_label(k * step)) for k in range(int(y_high // step) + 1)]

    def px(x: float) -> float:
        return MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w

    def py(y: float) -> float:
        return MARGIN_TOP + (1 - (to_axis(y) - y_low) / (y_high - y_low)) * plot_h

    lines = []
    for index, line in enumerate(series):
        points = [
            f"{_fmt(px(x))},{_fmt(py(y))}"
            for x, y in zip(line.x, line.y)
            if math.isfinite(y) and (y > 0 or not logarithmic)
        ]
        lines.append(
            {
                "label": line.label,
                "points": " ".join(points),
                "markers": [point.split(",") for point in points],
                "color": PALETTE[index % len(PALETTE)],
                "dash": DASHES[(index // len(PALETTE)) % len(DASHES)],
                "legend_y": _fmt(MARGIN_TOP + 10 + 18 * index),
            }
        )

    x_ticks = [
        Tick(position=_fmt(px(value)), label=_tick_label(value))
        for value in np.linspace(x_min, x_max, 6)
    ]
    if logarithmic:
        ticks = [Tick(position=_fmt(py(10**value)), label=label) for value, label in y_ticks]
    else:
        ticks = [Tick(position=_fmt(py(value)), label=label) for value, label in y_ticks]

    metadata = [
        (table.label, key, value) for table in tables for key, value in table.metadata.items()
    ]
    return environment.get_template("figure.svg.j2").render(
        width=width,
        height=height,
        left=MARGIN_LEFT,
        top=MARGIN_TOP,
        right=_fmt(MARGIN_LEFT + plot_w),
        bottom=_fmt(MARGIN_TOP + plot_h),
        plot_w=plot_w,
        plot_h=plot_h,
        title=title or ("Distortion outage probability" if logarithmic else "SNR exponent"),
        x_label="SNR (dB)" if logarithmic else "bandwidth ratio b",
        y_label="outage probability" if logarithmic else "SNR exponent",
        x_ticks=x_ticks,
        y_ticks=ticks,
        lines=lines,
        legend_x=_fmt(MARGIN_LEFT + plot_w + 15),
        metadata=metadata,
    )


def write_svg(tables: Sequence[ResultTable], path: str | Path, title: str | None = None) -> Path:
    text = render_svg(tables, title)
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as e:
        raise FigureError(f"Cannot write {path}: {e.strerror}", "FIGURE_IO") from e
    logger.info("Wrote %s with %d series", path, text.count("<polyline"))
    return path
