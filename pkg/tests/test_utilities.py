import math

import pytest

from distout.config import Dev, Test, env_settings, logging_config
from distout.utilities import (
    decimal_to_string,
    parse_grid,
    parse_pair,
    probability_to_string,
    seconds_to_string,
)


def test_decimal_to_string():
    assert decimal_to_string(1234.5) == "1,234.5"
    assert decimal_to_string(32.0) == "32"
    assert decimal_to_string(1 / 3, digits=2) == "0.33"
    assert decimal_to_string(math.inf) == "+inf"
    assert decimal_to_string(None) is None


def test_probability_to_string():
    assert probability_to_string(0.000123) == "1.23E-4"
    assert probability_to_string(0.0) == "0"
    assert probability_to_string(None) is None


def test_seconds_to_string():
    assert seconds_to_string(90.0)
    assert seconds_to_string(None) is None


def test_parse_pair():
    assert parse_pair("20, 40") == (20.0, 40.0)
    with pytest.raises(ValueError):
        parse_pair("20")


def test_parse_grid():
    assert parse_grid("0,1,0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert parse_grid("0.1,0.3,0.1") == [0.1, 0.2, 0.3]
    for text in ("0,1", "0,1,0", "1,0,0.5"):
        with pytest.raises(ValueError):
            parse_grid(text)


def test_settings_classes():
    assert env_settings == {"dev": Dev, "test": Test}
    assert Test().ENV == "test"
    assert Test().BATCH_SIZE < Dev().BATCH_SIZE


def test_logging_config_level():
    config = logging_config("debug")
    assert config["loggers"]["distout"]["level"] == "DEBUG"
    assert config["handlers"]["console"]["stream"] == "ext://sys.stderr"
