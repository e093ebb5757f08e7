"""
Monte Carlo distortion outage estimation for the transmitter informed bound and
the separation scheme, plus the exact oracles used to validate it.

Both estimators consume the same channel stream: one I_H(snr) evaluation per
trial decides the informed event and the separation event.
"""

from __future__ import annotations

import logging
import math

from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.stats import beta

from distout.channel import ChannelRealization, sample_channel_batch
from distout.config import settings
from distout.enumerations import SeparationRegime
from distout.errors import OutageError
from distout.model import (
    ChannelInput,
    MiEstimatorSettings,
    Scenario,
    SystemConfig,
    gaussian_rd_distortion,
    separation_regime,
)
from distout.mutual_info import mutual_information, mutual_information_batch


logger = logging.getLogger(__name__)


class OutageEstimate(BaseModel):
    """Estimated outage probability with an exact Clopper-Pearson interval."""

    model_config = ConfigDict(frozen=True)

    p_hat: float = Field(ge=0, le=1)
    ci_low: float = Field(ge=0, le=1)
    ci_high: float = Field(ge=0, le=1)
    trials: int = Field(ge=1)
    outage_count: int = Field(ge=0)
    confidence: float = Field(gt=0, lt=1)

    @model_validator(mode="after")
    def check_ordering(self) -> "OutageEstimate":
        if self.outage_count > self.trials:
            raise ValueError("outage_count exceeds trials")
        if not math.isclose(self.p_hat, self.outage_count / self.trials, rel_tol=1e-12):
            raise ValueError("p_hat must equal outage_count / trials")
        if not (self.ci_low <= self.p_hat <= self.ci_high):
            raise ValueError("Confidence interval does not contain p_hat")
        return self

    @classmethod
    def from_counts(
        cls, outage_count: int, trials: int, confidence: float | None = None
    ) -> "OutageEstimate":
        confidence = settings.DEFAULT_CONFIDENCE if confidence is None else confidence
        low, high = binomial_ci(outage_count, trials, confidence)
        return cls(
            p_hat=outage_count / trials,
            ci_low=low,
            ci_high=high,
            trials=trials,
            outage_count=outage_count,
            confidence=confidence,
        )

    def contains(self, probability: float) -> bool:
        return self.ci_low <= probability <= self.ci_high


class OutageCounts(NamedTuple):
    informed: int
    separation: int | None
    trials: int

    def __add__(self, other: "OutageCounts") -> "OutageCounts":
        separation = (
            None
            if self.separation is None or other.separation is None
            else self.separation + other.separation
        )
        return OutageCounts(
            self.informed + other.informed, separation, self.trials + other.trials
        )


def binomial_ci(successes: int, trials: int, confidence: float) -> tuple[float, float]:
    """Exact two-sided Clopper-Pearson interval for a binomial proportion."""
    if trials < 1 or not (0 <= successes <= trials):
        raise OutageError(
            f"Need 0 <= successes <= trials and trials >= 1, got ({successes}, {trials})",
            "BINOMIAL_DOMAIN",
        )
    if not (0 < confidence < 1):
        raise OutageError(
            f"Confidence must lie in (0, 1), got {confidence!r}", "CONFIDENCE_DOMAIN"
        )
    alpha = 1.0 - confidence
    p_hat = successes / trials
    low = 0.0 if successes == 0 else float(beta.ppf(alpha / 2, successes, trials - successes + 1))
    high = (
        1.0
        if successes == trials
        else float(beta.ppf(1 - alpha / 2, successes + 1, trials - successes))
    )
    return min(low, p_hat), max(high, p_hat)


def siso_gaussian_outage_closed_form(snr: float, R: float) -> float:
    """Pr{log2(1 + snr |h|^2) < R} = 1 - exp(-(2^R - 1)/snr) for Rayleigh |h|^2."""
    if not (snr > 0):
        raise OutageError(f"snr must be positive, got {snr!r}", "SNR_DOMAIN")
    if not (R >= 0):
        raise OutageError(f"R must be nonnegative, got {R!r}", "RATE_DOMAIN")
    if math.isinf(snr):
        return 0.0
    return -math.expm1(-math.expm1(R * math.log(2.0)) / snr)


def informed_distortion(
    H: ChannelRealization,
    snr: float,
    b: float,
    config: SystemConfig,
    channel_input: ChannelInput,
    mi_settings: MiEstimatorSettings | None = None,
) -> float:
    """Instantaneous distortion 2^(-2 b I_H(snr)) of the transmitter informed bound."""
    if not (b > 0):
        raise OutageError(f"b must be positive, got {b!r}", "BANDWIDTH_DOMAIN")
    information = mutual_information(H, snr, config, channel_input, mi_settings)
    return gaussian_rd_distortion(b * information)


def informed_outage_events(information: np.ndarray, threshold: float) -> np.ndarray:
    """
    I_H < threshold, with exact ties at a positive threshold counted as outage.

    A zero threshold (target distortion 1) is never missed.
    """
    events = information < threshold
    if threshold > 0:
        events |= information == threshold
    return events


def separation_outage_events(
    information: np.ndarray, R_c: float, regime: SeparationRegime
) -> np.ndarray:
    if regime == SeparationRegime.ALWAYS_OUTAGE:
        return np.ones(information.shape, dtype=bool)
    if regime == SeparationRegime.NEVER_OUTAGE:
        return np.zeros(information.shape, dtype=bool)
    return information <= R_c


def _batches(start: int, stop: int, size: int):
    for first in range(start, stop, size):
        yield first, min(first + size, stop)


def trial_information(
    scenario: Scenario,
    snr: float,
    start: int,
    stop: int,
    mi_settings: MiEstimatorSettings | None = None,
) -> np.ndarray:
    """I_H(snr) for trials [start, stop) of the scenario's channel stream."""
    mi_settings = mi_settings or scenario.mi
    pieces = []
    for first, last in _batches(start, stop, settings.BATCH_SIZE):
        blocks = sample_channel_batch(scenario.config, scenario.seed, first, last)
        pieces.append(
            mutual_information_batch(
                blocks, snr, scenario.config, scenario.input, mi_settings, first
            )
        )
    return np.concatenate(pieces) if pieces else np.empty(0)


def distortion_samples(
    scenario: Scenario, snr: float, start: int = 0, stop: int | None = None
) -> np.ndarray:
    """Per-trial informed distortion 2^(-2 b I_H(snr)) for trials [start, stop)."""
    stop = scenario.trials if stop is None else stop
    information = trial_information(scenario, snr, start, stop)
    return np.power(2.0, -2.0 * scenario.source.b * information)


def count_trial_range(
    scenario: Scenario,
    snr: float,
    start: int,
    stop: int,
    mi_settings: MiEstimatorSettings | None = None,
) -> OutageCounts:
    """Informed and separation outage counts over trials [start, stop)."""
    threshold = scenario.informed_threshold
    regime = (
        None
        if scenario.R_c is None
        else separation_regime(scenario.distortion, scenario.source.b, scenario.R_c)
    )
    informed = 0
    separation = None if regime is None else 0
    for first, last in _batches(start, stop, settings.BATCH_SIZE):
        information = trial_information(scenario, snr, first, last, mi_settings)
        informed += int(np.count_nonzero(informed_outage_events(information, threshold)))
        if regime is not None:
            separation += int(
                np.count_nonzero(
                    separation_outage_events(information, scenario.R_c, regime)
                )
            )
    return OutageCounts(informed, separation, stop - start)


def partition_trials(trials: int, workers: int) -> list[tuple[int, int]]:
    """Contiguous trial-index ranges, one per worker (empty ranges dropped)."""
    if workers < 1:
        raise OutageError(f"workers must be positive, got {workers}", "WORKERS_DOMAIN")
    bounds = np.linspace(0, trials, min(workers, trials) + 1).round().astype(int)
    return [(int(lo), int(hi)) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]


def count_outages(
    scenario: Scenario,
    snr: float,
    workers: int = 1,
    mi_settings: MiEstimatorSettings | None = None,
) -> OutageCounts:
    """Counts over all trials, split across workers; the sum is partition independent."""
    if not (snr >= 0) or not math.isfinite(snr):
        raise OutageError(f"snr must be nonnegative and finite, got {snr!r}", "SNR_DOMAIN")
    ranges = partition_trials(scenario.trials, workers)
    if len(ranges) == 1:
        parts = [count_trial_range(scenario, snr, *ranges[0], mi_settings)]
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as executor:
            parts = list(
                executor.map(
                    lambda bounds: count_trial_range(scenario, snr, *bounds, mi_settings),
                    ranges,
                )
            )
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total


def informed_outage_mc(scenario: Scenario, snr: float, workers: int = 1) -> OutageEstimate:
    """Pr{I_H(snr) < R_s(D_bar)/b} by Monte Carlo."""
    counts = count_outages(scenario, snr, workers)
    return OutageEstimate.from_counts(counts.informed, counts.trials, scenario.confidence)


def separation_outage_mc(scenario: Scenario, snr: float, workers: int = 1) -> OutageEstimate:
    """
    Separation outage bound at rate scenario.R_c.

    Outside the information-outage regime the answer is 0 or 1 without sampling.
    """
    if scenario.R_c is None:
        raise OutageError("Scenario has no separation rate R_c", "MISSING_RATE")
    regime = separation_regime(scenario.distortion, scenario.source.b, scenario.R_c)
    logger.debug("Separation regime at R_c=%s: %s", scenario.R_c, regime.value)
    if regime == SeparationRegime.ALWAYS_OUTAGE:
        count = scenario.trials
    elif regime == SeparationRegime.NEVER_OUTAGE:
        count = 0
    else:
        count = count_outages(scenario, snr, workers).separation
    return OutageEstimate.from_counts(count, scenario.trials, scenario.confidence)
