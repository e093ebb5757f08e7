"""
Closed-form SNR exponents of the distortion outage probability and of the
expected distortion, and an empirical log-log slope estimator.

The discrete-input formulas use the Singleton bound n_r (1 + floor(N (n_t - R/m))).
The bound is evaluated for rates in (0, m n_t] and clamped to zero beyond; note
that the minimum bandwidth ratio -log2(D_bar)/(2m) is stated for rates up to m
only, and min_bandwidth_ratio reports that threshold unchanged.
"""

from __future__ import annotations

import logging
import math

from typing import Iterable, NamedTuple, Sequence

import numpy as np

from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import bisect
from scipy.stats import linregress

from distout.config import settings
from distout.enumerations import ExponentRegime
from distout.errors import ExponentError, SlopeError
from distout.model import ChannelInput, SystemConfig, gaussian_rd_rate


logger = logging.getLogger(__name__)


class ExponentResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float = Field(ge=0)
    regime: ExponentRegime
    # 1-based regime index for the expected-distortion separation formula
    index: int | None = None

    def __float__(self) -> float:
        return self.value


class ExpectedSeparationExponent(NamedTuple):
    """The closed-form regime formula next to the variational max-min value."""

    formula: ExponentResult
    oracle: float


class SlopeEstimate(NamedTuple):
    slope: float
    intercept: float
    residual: float
    points: int
    snr_low: float
    snr_high: float


def _check_bandwidth_ratio(b: float) -> None:
    if not (b > 0) or math.isnan(b):
        raise ExponentError(f"b must be positive, got {b!r}", "BANDWIDTH_DOMAIN")


def _check_target(D_bar: float) -> None:
    if not (0 < D_bar <= 1):
        raise ExponentError(f"D_bar must lie in (0, 1], got {D_bar!r}", "DISTORTION_DOMAIN")


def _stable_floor(value: float) -> int:
    nearest = round(value)
    if abs(value - nearest) <= settings.FLOOR_TOLERANCE:
        return int(nearest)
    return math.floor(value)


def _tag(value: float, config: SystemConfig) -> ExponentRegime:
    if value <= 0:
        return ExponentRegime.ZERO
    if value >= config.full_diversity:
        return ExponentRegime.FULL_DIVERSITY
    return ExponentRegime.SINGLETON_LIMITED


def singleton_exponent(config: SystemConfig, m: int, R: float) -> ExponentResult:
    """n_r (1 + floor(N (n_t - R/m))) for 0 < R <= m n_t, zero above, full diversity at R = 0."""
    if not (R >= 0):
        raise ExponentError(f"Rate must be nonnegative, got {R!r}", "RATE_DOMAIN")
    if m < 1:
        raise ExponentError(f"m must be at least 1, got {m!r}", "BITS_DOMAIN")
    if R == 0:
        return ExponentResult(value=config.full_diversity, regime=ExponentRegime.FULL_DIVERSITY)
    value = config.n_r * (1 + _stable_floor(config.N * (config.n_t - R / m)))
    value = min(max(value, 0), config.full_diversity)
    return ExponentResult(value=value, regime=_tag(value, config))


def informed_exponent(
    config: SystemConfig, channel_input: ChannelInput, b: float, D_bar: float
) -> ExponentResult:
    """Distortion outage exponent of the transmitter informed bound."""
    _check_bandwidth_ratio(b)
    _check_target(D_bar)
    if channel_input.is_gaussian:
        return ExponentResult(
            value=config.full_diversity, regime=ExponentRegime.FULL_DIVERSITY
        )
    rate = gaussian_rd_rate(D_bar) / b
    logger.debug("Informed exponent at R_c(D_bar)=%s, m=%s", rate, channel_input.m)
    return singleton_exponent(config, channel_input.m, rate)


def separation_exponent(
    config: SystemConfig, channel_input: ChannelInput, R_c: float
) -> ExponentResult:
    """Distortion outage exponent of tandem separation at coding rate R_c."""
    if not (R_c >= 0):
        raise ExponentError(f"R_c must be nonnegative, got {R_c!r}", "RATE_DOMAIN")
    if channel_input.is_gaussian:
        return ExponentResult(
            value=config.full_diversity, regime=ExponentRegime.FULL_DIVERSITY
        )
    return singleton_exponent(config, channel_input.m, R_c)


def tradeoff_anchor(config: SystemConfig, k: int) -> int:
    """d*(k) = N (n_t - k)(n_r - k)."""
    return config.N * (config.n_t - k) * (config.n_r - k)


def dmt_anchors(config: SystemConfig) -> list[tuple[int, int]]:
    return [(k, tradeoff_anchor(config, k)) for k in range(config.min_antennas + 1)]


def dmt_curve(config: SystemConfig, r_c: float) -> float:
    """Piecewise linear diversity-multiplexing tradeoff through (k, d*(k))."""
    if not (0 <= r_c <= config.min_antennas):
        raise ExponentError(
            f"r_c must lie in [0, {config.min_antennas}], got {r_c!r}", "MULTIPLEXING_DOMAIN"
        )
    ks, ds = zip(*dmt_anchors(config))
    return float(np.interp(r_c, ks, ds))


def expected_tx_exponent(config: SystemConfig, b: float) -> ExponentResult:
    """N sum_i min{2b/N, 2i - 1 + |n_t - n_r|}, the expected-distortion informed exponent."""
    _check_bandwidth_ratio(b)
    offset = abs(config.n_t - config.n_r)
    value = config.N * sum(
        min(2 * b / config.N, 2 * i - 1 + offset)
        for i in range(1, config.min_antennas + 1)
    )
    regime = (
        ExponentRegime.FULL_DIVERSITY
        if math.isclose(value, config.full_diversity) or value >= config.full_diversity
        else ExponentRegime.BANDWIDTH_LIMITED
    )
    return ExponentResult(value=value, regime=regime)


def _separation_formula(config: SystemConfig, b: float) -> ExponentResult:
    inverse = 1.0 / b
    last = config.min_antennas
    chosen = last
    regime = ExponentRegime.LAST_REGIME
    for j in range(1, last + 1):
        previous, current = tradeoff_anchor(config, j - 1), tradeoff_anchor(config, j)
        low = 2 * (j - 1) / previous
        high = 2 * j / current if current > 0 else math.inf
        if low <= inverse < high:
            chosen, regime = j, ExponentRegime.SEPARATION_REGIME
            break
    previous, current = tradeoff_anchor(config, chosen - 1), tradeoff_anchor(config, chosen)
    value = (
        config.N
        * 2 * b * (chosen * previous - (chosen - 1) * current)
        / (2 * b + previous - current)
    )
    return ExponentResult(value=max(value, 0.0), regime=regime, index=chosen)


def _separation_oracle(config: SystemConfig, b: float) -> float:
    """max over r in [0, min(n_t, n_r)] of min{2 b r, d(r)}."""
    top = config.min_antennas
    grid = np.linspace(0.0, top, settings.ORACLE_GRID_POINTS)
    ks, ds = zip(*dmt_anchors(config))
    objective = np.minimum(2 * b * grid, np.interp(grid, ks, ds))
    best = int(np.argmax(objective))
    lo, hi = grid[max(best - 1, 0)], grid[min(best + 1, grid.size - 1)]

    def gap(r: float) -> float:
        return 2 * b * r - float(np.interp(r, ks, ds))

    # 2br rises and d(r) falls, so the maximum sits where they cross
    if gap(lo) < 0 < gap(hi):
        crossing = bisect(gap, lo, hi, xtol=1e-14)
        return 2 * b * crossing
    return float(objective[best])


def expected_sep_exponent(config: SystemConfig, b: float) -> ExpectedSeparationExponent:
    """Expected-distortion separation exponent: regime formula and max-min oracle."""
    _check_bandwidth_ratio(b)
    return ExpectedSeparationExponent(
        formula=_separation_formula(config, b), oracle=_separation_oracle(config, b)
    )


def min_bandwidth_ratio(D_bar: float, m: int) -> float:
    """b >= -log2(D_bar)/(2m), the bandwidth ratio below which discrete inputs lose diversity."""
    _check_target(D_bar)
    if m < 1:
        raise ExponentError(f"m must be at least 1, got {m!r}", "BITS_DOMAIN")
    return gaussian_rd_rate(D_bar) / m


def empirical_slope(
    points: Iterable[tuple[float, float]],
    window: tuple[float, float] | None = None,
) -> SlopeEstimate:
    """
    Least-squares slope of -log10(p) against log10(snr).

    points are (linear snr, p_hat) pairs; window optionally restricts them to a
    linear-SNR interval [low, high].
    """
    pairs = [(float(snr), float(p)) for snr, p in points]
    if window is not None:
        pairs = [(snr, p) for snr, p in pairs if window[0] <= snr <= window[1]]
    if any(not (0 < p <= 1) for _, p in pairs):
        raise SlopeError("Every p_hat must lie in (0, 1]", "SLOPE_ZERO_PROBABILITY")
    if any(not (snr > 0) for snr, _ in pairs):
        raise SlopeError("Every snr must be positive", "SLOPE_SNR_DOMAIN")
    if len(pairs) < 2:
        raise SlopeError(
            f"Need at least 2 points, got {len(pairs)}", "SLOPE_TOO_FEW_POINTS"
        )
    x = np.log10([snr for snr, _ in pairs])
    y = -np.log10([p for _, p in pairs])
    if np.ptp(x) == 0:
        raise SlopeError("All points share one snr value", "SLOPE_DEGENERATE")
    fit = linregress(x, y)
    residual = float(np.sqrt(np.mean((y - (fit.intercept + fit.slope * x)) ** 2)))
    return SlopeEstimate(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        residual=residual,
        points=len(pairs),
        snr_low=float(min(snr for snr, _ in pairs)),
        snr_high=float(max(snr for snr, _ in pairs)),
    )


class ExponentCurveRow(NamedTuple):
    b: float
    informed_gaussian: float
    informed_discrete: tuple[float, ...]
    expected_tx: float
    expected_sep_formula: float
    expected_sep_oracle: float


def exponent_curves(
    config: SystemConfig,
    inputs: Sequence[ChannelInput],
    D_bar: float,
    b_grid: Sequence[float],
) -> list[ExponentCurveRow]:
    """Exponents against bandwidth ratio for one system and target distortion."""
    rows = []
    for b in b_grid:
        sep = expected_sep_exponent(config, b)
        rows.append(
            ExponentCurveRow(
                b=float(b),
                informed_gaussian=informed_exponent(
                    config, ChannelInput.gaussian(), b, D_bar
                ).value,
                informed_discrete=tuple(
                    informed_exponent(config, channel_input, b, D_bar).value
                    for channel_input in inputs
                    if not channel_input.is_gaussian
                ),
                expected_tx=expected_tx_exponent(config, b).value,
                expected_sep_formula=sep.formula.value,
                expected_sep_oracle=sep.oracle,
            )
        )
    return rows
