"""SNR sweeps of both outage estimators on a shared channel stream."""

from __future__ import annotations

import logging
import time

from typing import Optional

from pydantic import BaseModel, ConfigDict

from distout.config import settings
from distout.enumerations import SeparationRegime
from distout.errors import DistoutError, SlopeError, SweepError
from distout.exponents import SlopeEstimate, empirical_slope
from distout.model import Scenario, db_to_linear, separation_regime
from distout.outage import OutageEstimate, count_outages
from distout.utilities import probability_to_string


logger = logging.getLogger(__name__)


class SweepRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    snr_db: float
    informed: OutageEstimate
    separation: Optional[OutageEstimate] = None
    wall_time_seconds: float = 0.0
    # informed count change when the discrete MI noise budget is doubled
    mi_sensitivity: Optional[int] = None

    def payload(self) -> dict:
        return self.model_dump(exclude={"wall_time_seconds"})


class SlopeFit(BaseModel):
    model_config = ConfigDict(frozen=True)

    slope: float
    residual: float
    points: int
    window_db: tuple[float, float]


class SweepResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    scenario: Scenario
    rows: tuple[SweepRow, ...]
    slope_informed: Optional[SlopeFit] = None
    slope_separation: Optional[SlopeFit] = None

    @property
    def separation_regime(self) -> SeparationRegime | None:
        if self.scenario.R_c is None:
            return None
        return separation_regime(
            self.scenario.distortion, self.scenario.source.b, self.scenario.R_c
        )

    def payload(self) -> dict:
        """Everything except wall times, for reproducibility comparisons."""
        return {
            "scenario": self.scenario.model_dump(),
            "rows": [row.payload() for row in self.rows],
            "slope_informed": self.slope_informed,
            "slope_separation": self.slope_separation,
        }


def _separation_estimate(
    scenario: Scenario, regime: SeparationRegime | None, count: int | None
) -> OutageEstimate | None:
    if regime is None:
        return None
    if regime == SeparationRegime.ALWAYS_OUTAGE:
        count = scenario.trials
    elif regime == SeparationRegime.NEVER_OUTAGE:
        count = 0
    return OutageEstimate.from_counts(count, scenario.trials, scenario.confidence)


def _describe(estimate: OutageEstimate) -> str:
    return "%d/%d p=%s CI [%s, %s]" % (
        estimate.outage_count,
        estimate.trials,
        probability_to_string(estimate.p_hat),
        probability_to_string(estimate.ci_low),
        probability_to_string(estimate.ci_high),
    )


def run_sweep(
    scenario: Scenario, workers: int | None = None, mi_sensitivity: bool = False
) -> SweepResult:
    """
    Runs both estimators at every grid point from one I_H evaluation per trial.

    Grid points run in order; trials within a point are split across workers.
    """
    workers = settings.WORKERS if workers is None else workers
    if workers < 1:
        raise SweepError(f"workers must be positive, got {workers}", "WORKERS_DOMAIN")
    regime = (
        None
        if scenario.R_c is None
        else separation_regime(scenario.distortion, scenario.source.b, scenario.R_c)
    )
    rows = []
    for snr_db, snr in zip(scenario.snr_grid_db, db_to_linear(scenario.snr_grid_db)):
        started = time.perf_counter()
        try:
            counts = count_outages(scenario, float(snr), workers)
            sensitivity = None
            if mi_sensitivity and not scenario.input.is_gaussian:
                doubled = count_outages(
                    scenario, float(snr), workers, scenario.mi.doubled()
                )
                sensitivity = doubled.informed - counts.informed
        except DistoutError as e:
            raise SweepError(
                f"Sweep failed at {snr_db} dB: {e.message}", e.error_code
            ) from e
        row = SweepRow(
            snr_db=snr_db,
            informed=OutageEstimate.from_counts(
                counts.informed, scenario.trials, scenario.confidence
            ),
            separation=_separation_estimate(scenario, regime, counts.separation),
            wall_time_seconds=time.perf_counter() - started,
            mi_sensitivity=sensitivity,
        )
        logger.info(
            "%6.2f dB  informed %s  separation %s  (%.2fs)",
            snr_db,
            _describe(row.informed),
            "-" if row.separation is None else _describe(row.separation),
            row.wall_time_seconds,
        )
        rows.append(row)
    return SweepResult(scenario=scenario, rows=tuple(rows))


def _fit(rows, window_db: tuple[float, float], column: str) -> SlopeEstimate:
    points = [
        (float(db_to_linear(row.snr_db)), getattr(row, column).p_hat)
        for row in rows
        if window_db[0] <= row.snr_db <= window_db[1]
        and getattr(row, column) is not None
        and getattr(row, column).p_hat > 0
    ]
    return empirical_slope(points)


def attach_slopes(result: SweepResult, window_db: tuple[float, float]) -> SweepResult:
    """Fills the slope fields from rows with snr_db in window_db and p_hat > 0."""
    low, high = window_db
    if not low <= high:
        raise SweepError(f"Empty window {window_db}", "WINDOW_DOMAIN")
    try:
        informed = _fit(result.rows, window_db, "informed")
    except SlopeError as e:
        raise SweepError(f"Cannot fit informed slope: {e.message}", e.error_code) from e
    update = {
        "slope_informed": SlopeFit(
            slope=informed.slope,
            residual=informed.residual,
            points=informed.points,
            window_db=(low, high),
        )
    }
    if any(row.separation is not None for row in result.rows):
        try:
            separation = _fit(result.rows, window_db, "separation")
            update["slope_separation"] = SlopeFit(
                slope=separation.slope,
                residual=separation.residual,
                points=separation.points,
                window_db=(low, high),
            )
        except SlopeError:
            logger.warning("Separation column has too few nonzero rows in %s dB", window_db)
    return result.model_copy(update=update)
