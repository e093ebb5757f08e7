import logging

import numpy as np
import pytest

from distout.channel import (
    CHANNEL_STREAM_TAG,
    ChannelRealization,
    TrialStream,
    counter_normals,
    sample_channel,
    sample_channel_batch,
)
from distout.errors import ChannelConfigError
from distout.model import SystemConfig


def test_realization_shape():
    config = SystemConfig(n_t=2, n_r=3, N=4)
    H = sample_channel(config, TrialStream(seed=1, trial_index=0))
    assert H.blocks.shape == (4, 3, 2)
    assert len(H) == 4
    assert H.shape == (3, 2)
    assert H.matches(config)
    assert not H.matches(SystemConfig(n_t=3, n_r=2, N=4))


def test_same_stream_same_realization():
    config = SystemConfig(n_t=2, n_r=2, N=2)
    stream = TrialStream(seed=99, trial_index=12)
    first = sample_channel(config, stream)
    second = sample_channel(config, stream)
    assert np.array_equal(first.blocks, second.blocks)
    assert first.trial_index == 12


def test_different_seeds_differ():
    config = SystemConfig(n_t=2, n_r=2, N=1)
    first = sample_channel(config, TrialStream(seed=1, trial_index=0))
    second = sample_channel(config, TrialStream(seed=2, trial_index=0))
    assert not np.array_equal(first.blocks, second.blocks)


def test_batch_rows_match_single_trials():
    config = SystemConfig(n_t=3, n_r=2, N=2)
    batch = sample_channel_batch(config, 7, 5, 10)
    assert batch.shape == (5, 2, 2, 3)
    for offset in range(5):
        single = sample_channel(config, TrialStream(seed=7, trial_index=5 + offset))
        assert np.array_equal(batch[offset], single.blocks)


def test_batch_split_does_not_change_stream():
    config = SystemConfig(n_t=2, n_r=2, N=3)
    whole = sample_channel_batch(config, 3, 0, 100)
    pieces = [sample_channel_batch(config, 3, lo, hi) for lo, hi in [(0, 17), (17, 64), (64, 100)]]
    assert np.array_equal(whole, np.concatenate(pieces))


def test_counter_normals_rows_are_independent_of_range():
    normals = counter_normals(CHANNEL_STREAM_TAG, 11, 0, 8, 6)
    assert normals.shape == (8, 6)
    assert np.array_equal(normals[3:], counter_normals(CHANNEL_STREAM_TAG, 11, 3, 8, 6))
    assert np.all(np.isfinite(normals))


def test_counter_normals_rejects_bad_range():
    with pytest.raises(ChannelConfigError) as excinfo:
        counter_normals(CHANNEL_STREAM_TAG, 1, 5, 2, 4)
    assert excinfo.value.error_code == "TRIAL_RANGE"


def test_entries_are_circular_unit_gaussian():
    config = SystemConfig(n_t=4, n_r=4, N=1)
    entries = sample_channel_batch(config, 2024, 0, 62_500).ravel()
    assert entries.size == 1_000_000
    assert np.mean(np.abs(entries) ** 2) == pytest.approx(1.0, abs=0.01)
    assert abs(np.mean(entries)) < 0.005
    assert abs(np.corrcoef(entries.real, entries.imag)[0, 1]) < 0.01
    assert np.var(entries.real) == pytest.approx(0.5, abs=0.01)


def test_consecutive_trials_are_uncorrelated():
    config = SystemConfig(n_t=1, n_r=1, N=1)
    entries = sample_channel_batch(config, 5, 0, 200_000).ravel()
    even, odd = entries[0::2], entries[1::2]
    assert abs(np.corrcoef(even.real, odd.real)[0, 1]) < 0.01
    assert abs(np.corrcoef(np.abs(even) ** 2, np.abs(odd) ** 2)[0, 1]) < 0.01


def test_batch_sampling_is_logged(caplog):
    caplog.set_level(logging.DEBUG, logger="distout.channel")
    sample_channel_batch(SystemConfig(n_t=1, n_r=1, N=1), 3, 10, 14)
    assert any("trials [10, 14)" in record.getMessage() for record in caplog.records)


def test_realization_validation():
    with pytest.raises(ChannelConfigError) as excinfo:
        ChannelRealization(blocks=np.ones((2, 2)))
    assert excinfo.value.error_code == "REALIZATION_SHAPE"
    with pytest.raises(ChannelConfigError):
        ChannelRealization.from_blocks([[np.nan]])
    assert ChannelRealization.from_blocks([[1.0]]).blocks.shape == (1, 1, 1)
