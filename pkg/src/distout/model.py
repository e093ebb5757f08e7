"""
Domain types and the rate-distortion algebra of a unit-variance Gaussian source
under quadratic distortion.

Only the bandwidth ratio b = NL/K enters any result, so K and L are never stored.
"""

from __future__ import annotations

import math

from typing import NamedTuple

import numpy as np

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from distout.config import settings
from distout.enumerations import (
    Constellation,
    InputKind,
    SeparationRegime,
    constellation_orders,
)
from distout.errors import ModelDomainError


# Relative tolerance used when comparing D_s(b R_c) against a target distortion
REGIME_RTOL = 1e-12

# Mean constellation energy must equal one within this
ENERGY_TOLERANCE = 1e-12


class SystemConfig(BaseModel):
    """n_t transmit antennas, n_r receive antennas and N fading blocks per codeword."""

    model_config = ConfigDict(frozen=True)

    n_t: int = Field(ge=1)
    n_r: int = Field(ge=1)
    N: int = Field(ge=1)

    @property
    def full_diversity(self) -> int:
        return self.N * self.n_t * self.n_r

    @property
    def min_antennas(self) -> int:
        return min(self.n_t, self.n_r)

    def __str__(self) -> str:
        return f"{self.n_t}x{self.n_r}, N={self.N}"


class ChannelInput(BaseModel):
    """
    Gaussian input, or uniform input over a discrete constellation.

    Discrete constellations have a power-of-two point count and unit mean energy.
    """

    model_config = ConfigDict(frozen=True)

    kind: InputKind
    points: tuple[complex, ...] = ()
    name: str | None = None

    @model_validator(mode="after")
    def check_points(self) -> "ChannelInput":
        if self.kind == InputKind.GAUSSIAN:
            if self.points:
                raise ValueError("Gaussian input carries no constellation points")
            return self
        count = len(self.points)
        if count < 2 or count & (count - 1):
            raise ValueError(
                f"Discrete point count must be a power of two >= 2, got {count}"
            )
        energy = float(np.mean(np.abs(np.asarray(self.points)) ** 2))
        if abs(energy - 1.0) > ENERGY_TOLERANCE:
            raise ValueError(f"Constellation mean energy is {energy!r}, expected 1")
        return self

    @property
    def m(self) -> int | None:
        """Bits per symbol, log2 of the point count; None for Gaussian input."""
        if self.kind == InputKind.GAUSSIAN:
            return None
        return len(self.points).bit_length() - 1

    @property
    def is_gaussian(self) -> bool:
        return self.kind == InputKind.GAUSSIAN

    def points_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=np.complex128)

    def __str__(self) -> str:
        if self.is_gaussian:
            return "gaussian"
        return self.name or f"discrete-{len(self.points)}"

    @classmethod
    def gaussian(cls) -> "ChannelInput":
        return cls(kind=InputKind.GAUSSIAN)

    @classmethod
    def discrete(cls, points, name: str | None = None) -> "ChannelInput":
        """Builds a discrete input, scaling the points to unit mean energy."""
        array = np.asarray(points, dtype=np.complex128).ravel()
        if array.size == 0 or not np.all(np.isfinite(array)):
            raise ModelDomainError(
                "Constellation points must be finite and nonempty",
                "CONSTELLATION_POINTS",
            )
        energy = np.mean(np.abs(array) ** 2)
        if energy <= 0:
            raise ModelDomainError(
                "Constellation has zero energy", "CONSTELLATION_ENERGY"
            )
        array = array / np.sqrt(energy)
        return cls(
            kind=InputKind.DISCRETE,
            points=tuple(complex(point) for point in array),
            name=name,
        )

    @classmethod
    def from_constellation(cls, constellation: Constellation | str) -> "ChannelInput":
        constellation = Constellation(constellation)
        order = constellation_orders[constellation]
        if constellation.value.endswith("qam"):
            side = math.isqrt(order)
            amplitudes = 2 * np.arange(side) + 1 - side
            points = (amplitudes[:, None] + 1j * amplitudes[None, :]).ravel()
        elif constellation == Constellation.QPSK:
            # Gray-mapped QPSK sits on the diagonals
            points = np.exp(1j * (np.pi / 4 + np.pi / 2 * np.arange(order)))
        else:
            points = np.exp(2j * np.pi * np.arange(order) / order)
        # cos/sin leave ~1e-16 imaginary residue on the real axis
        points = np.round(points.real, 15) + 1j * np.round(points.imag, 15)
        return cls.discrete(points, name=constellation.value)


class SourceModel(BaseModel):
    """Unit-variance Gaussian source; b channel uses per source symbol."""

    model_config = ConfigDict(frozen=True)

    b: float = Field(gt=0, allow_inf_nan=False)


class DistortionSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    D_bar: float = Field(gt=0, le=1)
    d0: float = Field(default=0.5, gt=0, allow_inf_nan=False)


class MiEstimatorSettings(BaseModel):
    """Noise budget and seed of the discrete-input mutual information estimator."""

    model_config = ConfigDict(frozen=True)

    noise_samples: int = Field(default=settings.MI_NOISE_SAMPLES, ge=1)
    mi_seed: int = Field(default=settings.MI_SEED, ge=0, lt=2**64)

    def doubled(self) -> "MiEstimatorSettings":
        return self.model_copy(update={"noise_samples": 2 * self.noise_samples})


class Scenario(BaseModel):
    """Everything one experiment needs: system, input, source, target and SNR grid."""

    model_config = ConfigDict(frozen=True)

    config: SystemConfig
    input: ChannelInput
    source: SourceModel
    distortion: DistortionSpec
    # None skips the separation estimator
    R_c: float | None = Field(default=None, ge=0, allow_inf_nan=False)
    snr_grid_db: tuple[float, ...]
    trials: int = Field(ge=1)
    seed: int = Field(ge=0, lt=2**64)
    confidence: float = Field(default=settings.DEFAULT_CONFIDENCE, gt=0, lt=1)
    mi: MiEstimatorSettings = MiEstimatorSettings()

    @field_validator("snr_grid_db")
    @classmethod
    def check_grid(cls, grid: tuple[float, ...]) -> tuple[float, ...]:
        if not grid:
            raise ValueError("SNR grid is empty")
        if not all(math.isfinite(value) for value in grid):
            raise ValueError("SNR grid values must be finite")
        if any(later <= earlier for earlier, later in zip(grid, grid[1:])):
            raise ValueError("SNR grid must be strictly increasing")
        return grid

    @property
    def informed_threshold(self) -> float:
        """Target rate R_s(D_bar)/b below which the informed bound is in outage."""
        return optimal_separation_rate(self.distortion.D_bar, self.source.b)

    def snr_linear(self) -> np.ndarray:
        return db_to_linear(np.asarray(self.snr_grid_db, dtype=float))


class RateRange(NamedTuple):
    """Half-open interval [low, high) of channel coding rates."""

    low: float
    high: float

    def __contains__(self, rate) -> bool:
        return self.low <= rate < self.high


def db_to_linear(snr_db):
    return np.power(10.0, np.asarray(snr_db, dtype=float) / 10.0)


def _check_distortion(D: float, name: str = "D") -> None:
    if not (0 < D <= 1) or math.isnan(D):
        raise ModelDomainError(f"{name} must lie in (0, 1], got {D!r}", "DISTORTION_DOMAIN")


def _check_bandwidth_ratio(b: float) -> None:
    if not (b > 0) or not math.isfinite(b):
        raise ModelDomainError(f"b must be positive and finite, got {b!r}", "BANDWIDTH_DOMAIN")


def gaussian_rd_distortion(R: float) -> float:
    """Distortion-rate function D(R) = 2^(-2R) of the unit-variance Gaussian source."""
    if not (R >= 0):
        raise ModelDomainError(f"Rate must be nonnegative, got {R!r}", "RATE_DOMAIN")
    return 2.0 ** (-2.0 * R)


def gaussian_rd_rate(D: float) -> float:
    """Rate-distortion function R_s(D) = -log2(D)/2, inverse of gaussian_rd_distortion."""
    _check_distortion(D)
    return -math.log2(D) / 2.0 + 0.0


def optimal_separation_rate(D_bar: float, b: float) -> float:
    """R_c* = R_s(D_bar)/b, the coding rate at which separation meets the informed bound."""
    _check_distortion(D_bar, "D_bar")
    _check_bandwidth_ratio(b)
    return gaussian_rd_rate(D_bar) / b


def admissible_rate_range(D_bar: float, d0: float, b: float) -> RateRange:
    """
    Coding rates with D_s(b R_c) <= D_bar < D_s(b R_c) + d0.

    The upper limit is infinite when D_bar <= d0: every rate above the lower
    limit then satisfies the right-hand inequality.
    """
    _check_distortion(D_bar, "D_bar")
    _check_bandwidth_ratio(b)
    if not (d0 > 0) or not math.isfinite(d0):
        raise ModelDomainError(f"d0 must be positive, got {d0!r}", "D0_DOMAIN")
    low = gaussian_rd_rate(D_bar) / b
    residual = D_bar - d0
    high = gaussian_rd_rate(residual) / b if residual > 0 else math.inf
    return RateRange(low, high)


def source_distortion(b: float, R_c: float) -> float:
    """D_s(b R_c): distortion of the source code when no channel error occurs."""
    _check_bandwidth_ratio(b)
    return gaussian_rd_distortion(b * R_c)


def separation_regime(distortion: DistortionSpec, b: float, R_c: float) -> SeparationRegime:
    """Classifies a separation rate into the three cases of its outage bound."""
    d_source = source_distortion(b, R_c)
    D_bar = distortion.D_bar
    if d_source > D_bar and not math.isclose(d_source, D_bar, rel_tol=REGIME_RTOL):
        return SeparationRegime.ALWAYS_OUTAGE
    if d_source + distortion.d0 <= D_bar:
        return SeparationRegime.NEVER_OUTAGE
    return SeparationRegime.INFORMATION_OUTAGE


def separation_distortion_bound(b: float, R_c: float, d0: float, in_outage) -> np.ndarray:
    """Upper bound D_s(b R_c) + d0 * 1{I_H <= R_c} on the separation distortion."""
    return source_distortion(b, R_c) + d0 * np.asarray(in_outage, dtype=float)
