from __future__ import annotations

import math

from datetime import timedelta

from babel import dates, numbers  # type: ignore

from distout.config import settings


# Mask functions
def decimal_to_string(value: float | None, digits: int = 4) -> str | None:
    """Localized decimal with up to `digits` fraction digits; infinities spelled out."""
    if value is None:
        return None
    if math.isinf(value):
        return "+inf" if value > 0 else "-inf"
    pattern = "#,##0." + "#" * digits if digits else "#,##0"
    return numbers.format_decimal(value, format=pattern, locale=settings.LOCALE)


def probability_to_string(value: float | None) -> str | None:
    return (
        numbers.format_scientific(value, format="0.###E0", locale=settings.LOCALE)
        if value
        else ("0" if value == 0 else None)
    )


def seconds_to_string(seconds: float | None) -> str | None:
    return (
        dates.format_timedelta(
            timedelta(seconds=seconds), threshold=2, locale=settings.LOCALE
        )
        if seconds is not None
        else None
    )


# Argument parsing helpers
def parse_pair(text: str) -> tuple[float, float]:
    """Parses "lo,hi" into two floats."""
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"Expected two comma separated numbers, got {text!r}")
    return float(parts[0]), float(parts[1])


def parse_grid(text: str) -> list[float]:
    """Parses "start,stop,step" into an inclusive, evenly spaced grid."""
    parts = [float(part) for part in text.split(",")]
    if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
        raise ValueError(f"Expected start,stop,step with step > 0, got {text!r}")
    start, stop, step = parts
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 12) for k in range(count)]
