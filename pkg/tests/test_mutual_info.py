import logging

import numpy as np
import pytest

from scipy.stats import unitary_group

from distout.channel import ChannelRealization, TrialStream, sample_channel
from distout.errors import MutualInfoError
from distout.model import ChannelInput, MiEstimatorSettings, SystemConfig
from distout.mutual_info import (
    discrete_input_mi,
    discrete_input_mi_estimate,
    gaussian_input_mi,
    joint_symbols,
    log_det_nats,
    mutual_information,
    mutual_information_batch,
)


SISO = SystemConfig(n_t=1, n_r=1, N=1)
BPSK = ChannelInput.from_constellation("bpsk")
QPSK = ChannelInput.from_constellation("qpsk")


def bpsk_awgn_mi(snr: float) -> float:
    """BPSK over unit-gain complex AWGN by 64-point Gauss-Hermite quadrature."""
    nodes, weights = np.polynomial.hermite.hermgauss(64)
    integrand = np.log2(1 + np.exp(-4 * snr - 4 * np.sqrt(snr) * nodes))
    return 1 - float(np.sum(weights * integrand) / np.sqrt(np.pi))


def test_zero_channel_has_no_information():
    H = ChannelRealization.from_blocks(np.zeros((2, 2, 2)))
    assert gaussian_input_mi(H, 10.0, SystemConfig(n_t=2, n_r=2, N=2)) == 0.0


def test_gaussian_mi_examples():
    assert gaussian_input_mi(ChannelRealization.from_blocks([[1.0]]), 1.0, SISO) == pytest.approx(1.0)
    identity = ChannelRealization.from_blocks(np.eye(2))
    assert gaussian_input_mi(identity, 2.0, SystemConfig(n_t=2, n_r=2, N=1)) == pytest.approx(2.0)


def test_gaussian_mi_matches_direct_log_det():
    rng = np.random.default_rng(3)
    for n_t, n_r in [(2, 3), (3, 2), (2, 2)]:
        blocks = (rng.standard_normal((2, n_r, n_t)) + 1j * rng.standard_normal((2, n_r, n_t))) / np.sqrt(2)
        config = SystemConfig(n_t=n_t, n_r=n_r, N=2)
        expected = np.mean(
            [np.linalg.slogdet(np.eye(n_r) + 4.0 / n_t * h @ h.conj().T)[1] for h in blocks]
        ) / np.log(2)
        assert gaussian_input_mi(ChannelRealization.from_blocks(blocks), 4.0, config) == (
            pytest.approx(expected, abs=1e-9)
        )


def test_gaussian_mi_unitary_invariance():
    config = SystemConfig(n_t=2, n_r=3, N=2)
    H = sample_channel(config, TrialStream(seed=4, trial_index=0))
    U = unitary_group.rvs(3, random_state=1)
    V = unitary_group.rvs(2, random_state=2)
    rotated = ChannelRealization.from_blocks(U @ H.blocks @ V)
    assert gaussian_input_mi(rotated, 5.0, config) == pytest.approx(
        gaussian_input_mi(H, 5.0, config), abs=1e-9
    )


def test_gaussian_mi_is_block_average():
    config = SystemConfig(n_t=2, n_r=2, N=3)
    single = SystemConfig(n_t=2, n_r=2, N=1)
    H = sample_channel(config, TrialStream(seed=8, trial_index=3))
    parts = [
        gaussian_input_mi(ChannelRealization.from_blocks(block), 3.0, single) for block in H.blocks
    ]
    assert gaussian_input_mi(H, 3.0, config) == pytest.approx(np.mean(parts), abs=1e-12)


def test_gaussian_mi_nondecreasing_in_snr():
    config = SystemConfig(n_t=2, n_r=2, N=2)
    H = sample_channel(config, TrialStream(seed=5, trial_index=0))
    values = [gaussian_input_mi(H, snr, config) for snr in np.logspace(-2, 4, 20)]
    assert all(later >= earlier for earlier, later in zip(values, values[1:]))


def test_log_det_stack_shape():
    blocks = np.zeros((5, 3, 2, 2), dtype=complex)
    assert log_det_nats(blocks, 1.0, 2).shape == (5, 3)


def test_mi_rejects_bad_inputs():
    H = ChannelRealization.from_blocks([[1.0]])
    with pytest.raises(MutualInfoError) as excinfo:
        gaussian_input_mi(H, -1.0, SISO)
    assert excinfo.value.error_code == "SNR_DOMAIN"
    with pytest.raises(MutualInfoError) as excinfo:
        gaussian_input_mi(H, 1.0, SystemConfig(n_t=2, n_r=1, N=1))
    assert excinfo.value.error_code == "REALIZATION_MISMATCH"
    with pytest.raises(MutualInfoError) as excinfo:
        discrete_input_mi(H, 1.0, SISO, ChannelInput.gaussian())
    assert excinfo.value.error_code == "INPUT_KIND"


def test_discrete_mi_is_zero_without_signal():
    H = ChannelRealization.from_blocks([[1.0]])
    estimate = discrete_input_mi_estimate(H, 0.0, SISO, QPSK)
    assert estimate.value == pytest.approx(0.0, abs=1e-12)


def test_discrete_mi_saturates():
    H = ChannelRealization.from_blocks([[1.0]])
    assert discrete_input_mi(H, 1e6, SISO, BPSK) == pytest.approx(1.0, abs=0.01)
    assert discrete_input_mi(H, 1e6, SISO, QPSK) == pytest.approx(2.0, abs=0.01)


def test_discrete_mi_matches_quadrature():
    H = ChannelRealization.from_blocks([[1.0]])
    exact = bpsk_awgn_mi(1.0)
    assert exact == pytest.approx(0.7215, abs=0.005)
    estimate = discrete_input_mi_estimate(
        H, 1.0, SISO, BPSK, MiEstimatorSettings(noise_samples=20000, mi_seed=1)
    )
    assert abs(estimate.value - exact) <= 3 * estimate.standard_error + 1e-3


def test_discrete_mi_below_gaussian():
    config = SystemConfig(n_t=2, n_r=2, N=1)
    mi = MiEstimatorSettings(noise_samples=500, mi_seed=3)
    for trial in range(4):
        H = sample_channel(config, TrialStream(seed=6, trial_index=trial))
        for snr in (0.5, 5.0, 50.0):
            estimate = discrete_input_mi_estimate(H, snr, config, QPSK, mi)
            assert 0 <= estimate.value <= 4
            assert estimate.value <= gaussian_input_mi(H, snr, config) + 3 * estimate.standard_error


def test_unclamped_estimate_stays_within_noise_of_bounds():
    config = SystemConfig(n_t=2, n_r=1, N=2)
    mi = MiEstimatorSettings(noise_samples=400, mi_seed=12)
    for trial in range(6):
        H = sample_channel(config, TrialStream(seed=21, trial_index=trial))
        for snr in (0.0, 0.05, 1.0, 20.0, 1e4):
            for channel_input, bits in ((BPSK, 1), (QPSK, 2)):
                estimate = discrete_input_mi_estimate(H, snr, config, channel_input, mi)
                slack = 3 * estimate.standard_error + 1e-9
                assert -slack <= estimate.unclamped <= bits * config.n_t + slack
                assert estimate.value == min(max(estimate.unclamped, 0.0), bits * config.n_t)


def test_discrete_batch_is_logged(caplog):
    caplog.set_level(logging.DEBUG, logger="distout.mutual_info")
    blocks = np.ones((3, 1, 1, 1), dtype=np.complex128)
    mi = MiEstimatorSettings(noise_samples=50, mi_seed=2)
    values = mutual_information_batch(blocks, 1.0, SISO, BPSK, mi, first_trial=5)
    assert values.shape == (3,)
    assert any("trials [5, 8)" in record.getMessage() for record in caplog.records)


def test_discrete_mi_monotone_within_noise():
    H = sample_channel(SISO, TrialStream(seed=2, trial_index=0))
    mi = MiEstimatorSettings(noise_samples=1000, mi_seed=9)
    estimates = [
        discrete_input_mi_estimate(H, snr, SISO, BPSK, mi) for snr in np.logspace(-1, 2, 20)
    ]
    for earlier, later in zip(estimates, estimates[1:]):
        slack = 3 * (earlier.standard_error + later.standard_error)
        assert later.value >= earlier.value - slack


def test_discrete_mi_is_deterministic_per_trial():
    config = SystemConfig(n_t=2, n_r=1, N=2)
    H = sample_channel(config, TrialStream(seed=1, trial_index=17))
    mi = MiEstimatorSettings(noise_samples=200, mi_seed=4)
    first = discrete_input_mi(H, 3.0, config, BPSK, mi)
    assert discrete_input_mi(H, 3.0, config, BPSK, mi) == first
    assert discrete_input_mi(H, 3.0, config, BPSK, mi, trial_index=18) != first


def test_joint_alphabet_limit():
    assert joint_symbols(QPSK, 2).shape == (16, 2)
    config = SystemConfig(n_t=3, n_r=1, N=1)
    H = ChannelRealization.from_blocks(np.ones((1, 1, 3)))
    with pytest.raises(MutualInfoError) as excinfo:
        discrete_input_mi(H, 1.0, config, ChannelInput.from_constellation("64qam"))
    assert excinfo.value.error_code == "JOINT_ALPHABET_OVERFLOW"


def test_dispatch_and_batch_agree():
    config = SystemConfig(n_t=1, n_r=2, N=2)
    mi = MiEstimatorSettings(noise_samples=100, mi_seed=2)
    realizations = [sample_channel(config, TrialStream(seed=3, trial_index=t)) for t in range(3)]
    blocks = np.stack([H.blocks for H in realizations])
    for channel_input in (ChannelInput.gaussian(), BPSK):
        batch = mutual_information_batch(blocks, 2.0, config, channel_input, mi, 0)
        single = [mutual_information(H, 2.0, config, channel_input, mi) for H in realizations]
        assert batch.tolist() == pytest.approx(single, abs=1e-12)
