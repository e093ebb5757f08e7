"""
Instantaneous mutual information I_H(snr) of the block-fading channel

    Y_i = sqrt(snr / n_t) H_i X_i + Z_i,    i = 1..N

for Gaussian inputs (log-det) and uniform discrete inputs (coded-modulation
mutual information with a Monte Carlo expectation over the noise).

Computations run in nats and are converted to bits once on return.
"""

from __future__ import annotations

import itertools
import logging
import math

from typing import NamedTuple

import numpy as np

from scipy.special import logsumexp

from distout.channel import NOISE_STREAM_TAG, ChannelRealization, counter_normals
from distout.config import settings
from distout.errors import MutualInfoError
from distout.model import ChannelInput, MiEstimatorSettings, SystemConfig


logger = logging.getLogger(__name__)

LN2 = math.log(2.0)

# Bound on the (rows x M x S) working array of the discrete estimator
_CHUNK_ELEMENTS = 2**22


class MiEstimate(NamedTuple):
    """A mutual information value in bits with its Monte Carlo standard error."""

    value: float
    standard_error: float
    unclamped: float


def _check_snr(snr: float) -> None:
    if not (snr >= 0) or not math.isfinite(snr):
        raise MutualInfoError(f"snr must be nonnegative and finite, got {snr!r}", "SNR_DOMAIN")


def _check_realization(H: ChannelRealization, config: SystemConfig) -> None:
    if not H.matches(config):
        raise MutualInfoError(
            f"Realization of shape {H.blocks.shape} does not match {config}",
            "REALIZATION_MISMATCH",
        )


def log_det_nats(blocks: np.ndarray, snr: float, n_t: int) -> np.ndarray:
    """
    ln det(I + (snr/n_t) H H^H) for a stack of matrices (..., n_r, n_t).

    Uses the smaller of the two Gram matrices and a Cholesky factorization.
    """
    n_r = blocks.shape[-2]
    conj_t = np.conj(np.swapaxes(blocks, -1, -2))
    gram = blocks @ conj_t if n_r <= n_t else conj_t @ blocks
    size = gram.shape[-1]
    system = np.eye(size) + (snr / n_t) * gram
    factor = np.linalg.cholesky(system)
    diagonal = np.real(np.diagonal(factor, axis1=-2, axis2=-1))
    return 2.0 * np.sum(np.log(diagonal), axis=-1)


def gaussian_input_mi_batch(blocks: np.ndarray, snr: float, n_t: int) -> np.ndarray:
    """Gaussian-input I_H(snr) in bits for channels stacked as (T, N, n_r, n_t)."""
    return np.mean(log_det_nats(blocks, snr, n_t), axis=-1) / LN2


def gaussian_input_mi(H: ChannelRealization, snr: float, config: SystemConfig) -> float:
    """(1/N) sum_i log2 det(I + (snr/n_t) H_i H_i^H)."""
    _check_snr(snr)
    _check_realization(H, config)
    return float(gaussian_input_mi_batch(H.blocks[None], snr, config.n_t)[0])


def joint_symbols(channel_input: ChannelInput, n_t: int) -> np.ndarray:
    """All |X|^n_t transmit vectors, shape (M, n_t)."""
    count = len(channel_input.points) ** n_t
    if count > settings.MAX_JOINT_VECTORS:
        raise MutualInfoError(
            f"{count} joint input vectors exceed the limit of {settings.MAX_JOINT_VECTORS}",
            "JOINT_ALPHABET_OVERFLOW",
        )
    points = channel_input.points_array()
    return np.array(list(itertools.product(points, repeat=n_t)), dtype=np.complex128)


def noise_draws(
    mi_settings: MiEstimatorSettings, trial_index: int, config: SystemConfig
) -> np.ndarray:
    """CN(0, 1) noise for every block of one trial, shape (N, S, n_r)."""
    samples = mi_settings.noise_samples
    per_trial = config.N * samples * config.n_r
    normals = counter_normals(
        NOISE_STREAM_TAG, mi_settings.mi_seed, trial_index, trial_index + 1, 2 * per_trial
    )[0]
    shape = (config.N, samples, config.n_r)
    return (normals[:per_trial].reshape(shape) + 1j * normals[per_trial:].reshape(shape)) * np.sqrt(0.5)


def _block_sample_terms(
    H_i: np.ndarray, snr: float, n_t: int, symbols: np.ndarray, noise: np.ndarray
) -> np.ndarray:
    """
    Per noise sample s: (1/M) sum_x ln sum_x' exp(|z_s|^2 - |a H_i (x - x') + z_s|^2).

    The exponent equals -|d|^2 - 2 Re(d^H z_s) with d = a H_i (x - x').
    """
    means = math.sqrt(snr / n_t) * (symbols @ H_i.T)
    count, samples = means.shape[0], noise.shape[0]
    rows = max(1, _CHUNK_ELEMENTS // (count * samples))
    totals = np.zeros(samples)
    for first in range(0, count, rows):
        diff = means[first : first + rows, None, :] - means[None, :, :]
        energy = np.sum(np.abs(diff) ** 2, axis=-1)
        cross = np.real(np.conj(diff) @ noise.T)
        exponents = -energy[..., None] - 2.0 * cross
        totals += np.sum(logsumexp(exponents, axis=1), axis=0)
    return totals / count


def discrete_input_mi_estimate(
    H: ChannelRealization,
    snr: float,
    config: SystemConfig,
    channel_input: ChannelInput,
    mi_settings: MiEstimatorSettings | None = None,
    trial_index: int | None = None,
) -> MiEstimate:
    """Coded-modulation I_H(snr) for uniform inputs over X^n_t, with standard error."""
    if channel_input.is_gaussian:
        raise MutualInfoError(
            "Discrete mutual information needs a discrete input", "INPUT_KIND"
        )
    _check_snr(snr)
    _check_realization(H, config)
    mi_settings = mi_settings or MiEstimatorSettings()
    trial_index = H.trial_index if trial_index is None else trial_index
    symbols = joint_symbols(channel_input, config.n_t)
    noise = noise_draws(mi_settings, trial_index, config)
    capacity = channel_input.m * config.n_t
    values, variances = [], []
    for H_i, z in zip(H.blocks, noise):
        terms = _block_sample_terms(H_i, snr, config.n_t, symbols, z) / LN2
        values.append(capacity - float(np.mean(terms)))
        if terms.size > 1:
            variances.append(float(np.var(terms, ddof=1)) / terms.size)
        else:
            variances.append(0.0)
    unclamped = float(np.mean(values))
    standard_error = math.sqrt(sum(variances)) / config.N
    value = min(max(unclamped, 0.0), float(capacity))
    return MiEstimate(value, standard_error, unclamped)


def discrete_input_mi(
    H: ChannelRealization,
    snr: float,
    config: SystemConfig,
    channel_input: ChannelInput,
    mi_settings: MiEstimatorSettings | None = None,
    trial_index: int | None = None,
) -> float:
    return discrete_input_mi_estimate(
        H, snr, config, channel_input, mi_settings, trial_index
    ).value


def mutual_information(
    H: ChannelRealization,
    snr: float,
    config: SystemConfig,
    channel_input: ChannelInput,
    mi_settings: MiEstimatorSettings | None = None,
) -> float:
    """I_H(snr) with the evaluator matching the input kind."""
    if channel_input.is_gaussian:
        return gaussian_input_mi(H, snr, config)
    return discrete_input_mi(H, snr, config, channel_input, mi_settings)


def mutual_information_batch(
    blocks: np.ndarray,
    snr: float,
    config: SystemConfig,
    channel_input: ChannelInput,
    mi_settings: MiEstimatorSettings,
    first_trial: int,
) -> np.ndarray:
    """I_H(snr) in bits for trials first_trial .. first_trial + len(blocks) - 1."""
    _check_snr(snr)
    if channel_input.is_gaussian:
        return gaussian_input_mi_batch(blocks, snr, config.n_t)
    logger.debug(
        "Discrete MI for trials [%d, %d) at snr %g, %d noise samples",
        first_trial,
        first_trial + blocks.shape[0],
        snr,
        mi_settings.noise_samples,
    )
    values = np.empty(blocks.shape[0])
    for offset, trial_blocks in enumerate(blocks):
        realization = ChannelRealization(trial_blocks, first_trial + offset)
        values[offset] = discrete_input_mi(
            realization, snr, config, channel_input, mi_settings
        )
    return values
