"""
Seeded sampling of i.i.d. Rayleigh MIMO block-fading realizations.

Random numbers come from a counter-based Philox stream. Trial t owns a fixed,
disjoint range of Philox counters, so realization t is a pure function of
(seed, t, config) no matter how trials are split across workers. Normals are
generated by inverse-CDF (scipy.special.ndtri) from open-interval uniforms,
which consumes exactly one 64-bit word per normal.
"""

from __future__ import annotations

import logging

from dataclasses import dataclass

import numpy as np

from pydantic import BaseModel, ConfigDict, Field
from scipy.special import ndtri

from distout.errors import ChannelConfigError
from distout.model import SystemConfig


logger = logging.getLogger(__name__)

# Upper 64 bits of the Philox key, one per independent stream family
CHANNEL_STREAM_TAG = 0x43484E4C
NOISE_STREAM_TAG = 0x4E4F4953

_WORDS_PER_COUNTER = 4
_TO_UNIT = 2.0**-53


class TrialStream(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: int = Field(ge=0, lt=2**64)
    trial_index: int = Field(ge=0)


@dataclass(frozen=True)
class ChannelRealization:
    """The N fading matrices H_1..H_N of one trial, stacked as (N, n_r, n_t)."""

    blocks: np.ndarray
    trial_index: int = 0

    def __post_init__(self):
        if self.blocks.ndim != 3:
            raise ChannelConfigError(
                f"Expected blocks of shape (N, n_r, n_t), got {self.blocks.shape}",
                "REALIZATION_SHAPE",
            )
        if not np.all(np.isfinite(self.blocks)):
            raise ChannelConfigError("Non-finite channel entries", "REALIZATION_FINITE")

    def __len__(self) -> int:
        return self.blocks.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.blocks.shape[1], self.blocks.shape[2]

    def matches(self, config: SystemConfig) -> bool:
        return self.blocks.shape == (config.N, config.n_r, config.n_t)

    @classmethod
    def from_blocks(cls, blocks, trial_index: int = 0) -> "ChannelRealization":
        array = np.asarray(blocks, dtype=np.complex128)
        if array.ndim == 2:
            array = array[None, :, :]
        return cls(blocks=array, trial_index=trial_index)


def counter_normals(
    tag: int, seed: int, start: int, stop: int, draws_per_trial: int
) -> np.ndarray:
    """
    Standard normals for trials [start, stop), shape (stop - start, draws_per_trial).

    Row k depends only on (tag, seed, start + k, draws_per_trial).
    """
    if stop < start or start < 0:
        raise ChannelConfigError(
            f"Invalid trial range [{start}, {stop})", "TRIAL_RANGE"
        )
    counters_per_trial = -(-draws_per_trial // _WORDS_PER_COUNTER)
    words_per_trial = counters_per_trial * _WORDS_PER_COUNTER
    bit_generator = np.random.Philox(key=(tag << 64) | seed)
    bit_generator.advance(start * counters_per_trial)
    raw = bit_generator.random_raw((stop - start) * words_per_trial)
    raw = raw.reshape(stop - start, words_per_trial)[:, :draws_per_trial]
    uniforms = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _TO_UNIT
    return ndtri(uniforms)


def sample_channel_batch(
    config: SystemConfig, seed: int, start: int, stop: int
) -> np.ndarray:
    """Fading matrices for trials [start, stop), shape (T, N, n_r, n_t)."""
    logger.debug("Sampling trials [%d, %d) for %s", start, stop, config)
    per_trial = config.N * config.n_r * config.n_t
    normals = counter_normals(CHANNEL_STREAM_TAG, seed, start, stop, 2 * per_trial)
    shape = (stop - start, config.N, config.n_r, config.n_t)
    real = normals[:, :per_trial].reshape(shape)
    imag = normals[:, per_trial:].reshape(shape)
    return (real + 1j * imag) * np.sqrt(0.5)


def sample_channel(config: SystemConfig, stream: TrialStream) -> ChannelRealization:
    """Draws H_1..H_N with i.i.d. CN(0, 1) entries for one trial."""
    blocks = sample_channel_batch(
        config, stream.seed, stream.trial_index, stream.trial_index + 1
    )[0]
    return ChannelRealization(blocks=blocks, trial_index=stream.trial_index)
