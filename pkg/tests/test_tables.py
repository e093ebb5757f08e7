import math

import pytest

from distout.enumerations import result_columns
from distout.errors import ResultTableError
from distout.exponents import exponent_curves
from distout.model import ChannelInput, SystemConfig
from distout.reporting.tables import (
    exponent_frame,
    parse_table,
    read_table,
    render_frame,
    render_sweep_table,
    sweep_frame,
    write_table,
)
from distout.sweep import attach_slopes, run_sweep

from tests.conftest import make_scenario


METADATA = [("scenario", "fig3.toml"), ("seed", "20240501")]


@pytest.fixture(scope="module")
def sweep_result():
    return run_sweep(make_scenario(snr_grid_db=(0.0, 5.0, 10.0), trials=3000))


def test_sweep_table_round_trip(sweep_result):
    text = render_sweep_table(sweep_result, METADATA)
    table = parse_table(text, "fig3.csv")
    assert list(table.frame.columns) == result_columns
    assert table.metadata == dict(METADATA)
    assert table.label == "fig3"
    assert not table.is_exponent_table
    for row, (_, parsed) in zip(sweep_result.rows, table.frame.iterrows()):
        assert parsed["snr_db"] == row.snr_db
        assert parsed["informed_p"] == row.informed.p_hat
        assert parsed["informed_ci_low"] == row.informed.ci_low
        assert parsed["informed_ci_high"] == row.informed.ci_high
        assert parsed["separation_ci_high"] == row.separation.ci_high
        assert parsed["trials"] == row.informed.trials


def test_sweep_table_layout(sweep_result):
    text = render_sweep_table(sweep_result, METADATA)
    lines = text.split("\n")
    assert lines[0] == "# scenario: fig3.toml"
    assert lines[2] == ",".join(result_columns)
    assert "\r" not in text
    assert text == render_sweep_table(sweep_result, METADATA)


def test_floats_keep_precision(sweep_result):
    text = render_sweep_table(sweep_result, METADATA)
    token = text.split("\n")[4].split(",")[2]
    assert len(token.replace(".", "").lstrip("0")) >= 9
    assert float(token) == sweep_result.rows[1].informed.ci_low


def test_missing_separation_is_empty():
    result = run_sweep(make_scenario(R_c=None, trials=50))
    frame = sweep_frame(result)
    assert frame["separation_p"].isna().all()
    parsed = parse_table(render_sweep_table(result, METADATA))
    assert parsed.frame["separation_p"].isna().all()


def test_slopes_are_echoed(sweep_result):
    fitted = attach_slopes(sweep_result, (0.0, 10.0))
    table = parse_table(render_sweep_table(fitted, METADATA))
    assert float(table.metadata["slope_informed"]) == fitted.slope_informed.slope
    assert table.metadata["slope_window_db"] == "0.0,10.0"


def test_exponent_table():
    config = SystemConfig(n_t=2, n_r=2, N=1)
    rows = exponent_curves(config, [ChannelInput.from_constellation("bpsk")], 0.05, [0.5, 1.0, 2.0])
    frame = exponent_frame(rows, ["bpsk"])
    assert list(frame.columns) == [
        "b",
        "informed_gaussian",
        "informed_bpsk",
        "expected_tx",
        "expected_sep_formula",
        "expected_sep_oracle",
    ]
    table = parse_table(render_frame(frame, METADATA))
    assert table.is_exponent_table
    assert table.frame["expected_sep_oracle"].iloc[0] == pytest.approx(1.0, abs=1e-9)


def test_header_is_checked():
    with pytest.raises(ResultTableError) as excinfo:
        parse_table("# a: b\nsnr_db,p\n0,0.5\n")
    assert excinfo.value.error_code == "TABLE_HEADER"


def test_key_column_must_increase(sweep_result):
    text = render_sweep_table(sweep_result, METADATA)
    lines = text.split("\n")
    lines[3], lines[4] = lines[4], lines[3]
    with pytest.raises(ResultTableError) as excinfo:
        parse_table("\n".join(lines))
    assert excinfo.value.error_code == "TABLE_ORDER"


def test_empty_table():
    with pytest.raises(ResultTableError) as excinfo:
        parse_table("# only: metadata\n")
    assert excinfo.value.error_code == "TABLE_PARSE"


def test_write_and_read(sweep_result, tmp_path):
    path = write_table(render_sweep_table(sweep_result, METADATA), tmp_path / "out.csv")
    table = read_table(path)
    assert len(table.frame) == 3
    assert not math.isnan(table.frame["informed_p"].iloc[0])
    with pytest.raises(ResultTableError):
        read_table(tmp_path / "missing.csv")
