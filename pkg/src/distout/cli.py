"""
Command line entry point.

    distout exponents SCENARIO [--csv] [--b-grid start,stop,step --out FILE.csv]
    distout sweep SCENARIO [--workers N] [--out PREFIX] [--window-db LO,HI]
                  [--confidence P] [--mi-sensitivity]
    distout figure CSV [CSV ...] --out FILE.svg [--title TEXT]

Any DistoutError exits with status 2 after printing "error_code: message".
"""

from __future__ import annotations

import argparse
import logging
import logging.config
import sys

from pathlib import Path
from typing import Sequence

import pandas as pd

from distout.__about__ import __version__
from distout.config import logging_config, settings
from distout.errors import DistoutError, SweepError
from distout.exponents import (
    dmt_anchors,
    exponent_curves,
    expected_sep_exponent,
    expected_tx_exponent,
    informed_exponent,
    min_bandwidth_ratio,
    separation_exponent,
)
from distout.model import admissible_rate_range, optimal_separation_rate
from distout.reporting.figures import write_svg
from distout.reporting.scenario_file import LoadedScenario, load_scenario, scenario_metadata
from distout.reporting.tables import (
    exponent_frame,
    read_table,
    render_frame,
    render_sweep_table,
    write_table,
)
from distout.sweep import attach_slopes, run_sweep
from distout.utilities import decimal_to_string, parse_grid, parse_pair, seconds_to_string


logger = logging.getLogger(__name__)


def exponent_report(loaded: LoadedScenario) -> list[tuple[str, float, str]]:
    """(quantity, value, note) rows covering every closed-form exponent."""
    scenario = loaded.scenario
    config, channel_input = scenario.config, scenario.input
    b, D_bar, d0 = scenario.source.b, scenario.distortion.D_bar, scenario.distortion.d0
    informed = informed_exponent(config, channel_input, b, D_bar)
    rows = [
        ("optimal_separation_rate", optimal_separation_rate(D_bar, b), "R_c* = R_s(D_bar)/b"),
    ]
    rate_range = admissible_rate_range(D_bar, d0, b)
    rows += [
        ("admissible_rate_low", rate_range.low, "inclusive"),
        ("admissible_rate_high", rate_range.high, "exclusive"),
        ("informed_exponent", informed.value, informed.regime.value),
    ]
    if scenario.R_c is not None:
        separation = separation_exponent(config, channel_input, scenario.R_c)
        rows.append(("separation_rate", scenario.R_c, "resolved"))
        rows.append(("separation_exponent", separation.value, separation.regime.value))
    for k, value in dmt_anchors(config):
        rows.append((f"dmt_anchor_{k}", float(value), f"d({k})"))
    expected_tx = expected_tx_exponent(config, b)
    expected_sep = expected_sep_exponent(config, b)
    rows += [
        ("expected_tx_exponent", expected_tx.value, expected_tx.regime.value),
        (
            "expected_sep_exponent_formula",
            expected_sep.formula.value,
            f"{expected_sep.formula.regime.value} j={expected_sep.formula.index}",
        ),
        ("expected_sep_exponent_oracle", expected_sep.oracle, "max_r min{2br, d(r)}"),
    ]
    if not channel_input.is_gaussian:
        rows.append(
            ("min_bandwidth_ratio", min_bandwidth_ratio(D_bar, channel_input.m), f"m={channel_input.m}")
        )
    return rows


def cmd_exponents(args: argparse.Namespace) -> int:
    loaded = load_scenario(args.scenario)
    metadata = scenario_metadata(loaded)
    if args.b_grid:
        scenario = loaded.scenario
        inputs = [] if scenario.input.is_gaussian else [scenario.input]
        rows = exponent_curves(
            scenario.config, inputs, scenario.distortion.D_bar, parse_grid(args.b_grid)
        )
        frame = exponent_frame(rows, [str(channel_input) for channel_input in inputs])
        text = render_frame(frame, metadata)
        if args.out:
            write_table(text, args.out)
        else:
            sys.stdout.write(text)
        return 0
    rows = exponent_report(loaded)
    if args.csv:
        frame = pd.DataFrame.from_records(rows, columns=["quantity", "value", "note"])
        sys.stdout.write(render_frame(frame, metadata))
        return 0
    for key, value in metadata:
        print(f"{key:>24}: {value}")
    print("")
    for quantity, value, note in rows:
        print(f"{quantity:>30}  {decimal_to_string(value):>10}  {note}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    loaded = load_scenario(args.scenario)
    if args.confidence is not None:
        loaded = loaded.model_copy(
            update={
                "scenario": loaded.scenario.model_copy(update={"confidence": args.confidence})
            }
        )
    scenario = loaded.scenario
    metadata = scenario_metadata(loaded)
    for key, value in metadata:
        if key in ("separation_rate", "separation_regime", "informed_threshold"):
            print(f"{key}: {value}")
    result = run_sweep(scenario, args.workers, mi_sensitivity=args.mi_sensitivity)
    window_db = args.window_db or settings.SLOPE_WINDOW_DB
    if window_db:
        try:
            result = attach_slopes(result, parse_pair(window_db))
        except SweepError as e:
            logger.warning("No slope fit in %s dB: %s", window_db, e)
        else:
            print(f"slope_informed: {decimal_to_string(result.slope_informed.slope)}")
            if result.slope_separation is not None:
                print(f"slope_separation: {decimal_to_string(result.slope_separation.slope)}")
    text = render_sweep_table(result, metadata)
    path = write_table(text, f"{args.out}.csv")
    total = sum(row.wall_time_seconds for row in result.rows)
    print(f"wrote {path} ({len(result.rows)} rows in {seconds_to_string(total)})")
    return 0


def cmd_figure(args: argparse.Namespace) -> int:
    tables = [read_table(path) for path in args.tables]
    path = write_svg(tables, args.out, args.title)
    print(f"wrote {path}")
    return 0


def _confidence(text: str) -> float:
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError("confidence must lie in (0, 1)")
    return value


def _workers(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("workers must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distout",
        description="Distortion outage probabilities and SNR exponents over MIMO block-fading channels.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="overrides DISTOUT_LOG_LEVEL")
    commands = parser.add_subparsers(dest="command", required=True)

    exponents = commands.add_parser("exponents", help="closed-form exponent report")
    exponents.add_argument("scenario", type=Path)
    exponents.add_argument("--csv", action="store_true", help="machine-readable output")
    exponents.add_argument("--b-grid", help="start,stop,step: exponent curves against b")
    exponents.add_argument("--out", help="CSV path for --b-grid output")
    exponents.set_defaults(handler=cmd_exponents)

    sweep = commands.add_parser("sweep", help="Monte Carlo outage sweep")
    sweep.add_argument("scenario", type=Path)
    sweep.add_argument("--workers", type=_workers, default=settings.WORKERS)
    sweep.add_argument("--out", default="sweep", help="output prefix; writes PREFIX.csv")
    sweep.add_argument("--window-db", help="lo,hi window for the slope fit")
    sweep.add_argument("--confidence", type=_confidence, default=None)
    sweep.add_argument(
        "--mi-sensitivity",
        action="store_true",
        help="rerun discrete inputs at twice the noise budget",
    )
    sweep.set_defaults(handler=cmd_sweep)

    figure = commands.add_parser("figure", help="SVG plot of result CSVs")
    figure.add_argument("tables", nargs="+", type=Path)
    figure.add_argument("--out", required=True, type=Path)
    figure.add_argument("--title", default=None)
    figure.set_defaults(handler=cmd_figure)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.config.dictConfig(logging_config(args.log_level))
    try:
        return args.handler(args)
    except DistoutError as e:
        print(str(e), file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"INVALID_ARGUMENT: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
