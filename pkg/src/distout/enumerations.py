import enum


class InputKind(str, enum.Enum):
    """
    Enumeration class representing the channel input alphabets.

    Attributes:
        GAUSSIAN (str): Circularly-symmetric complex Gaussian codebooks.
        DISCRETE (str): Uniform inputs over a finite constellation.
    """

    GAUSSIAN = "gaussian"
    DISCRETE = "discrete"


class Constellation(str, enum.Enum):
    """
    Enumeration class representing the built-in constellations.

    Every constellation is normalized to unit average energy when built.

    Attributes:
        BPSK (str): Binary phase shift keying, m = 1.
        QPSK (str): Quaternary phase shift keying, m = 2.
        PSK8 (str): 8-ary phase shift keying, m = 3.
        QAM16 (str): Square 16-QAM, m = 4.
        QAM64 (str): Square 64-QAM, m = 6.
    """

    BPSK = "bpsk"
    QPSK = "qpsk"
    PSK8 = "8psk"
    QAM16 = "16qam"
    QAM64 = "64qam"


class ExponentRegime(str, enum.Enum):
    """
    Enumeration class tagging which branch of an exponent formula applied.

    Attributes:
        FULL_DIVERSITY (str): The exponent equals N * n_t * n_r.
        SINGLETON_LIMITED (str): The Singleton bound is active and below full diversity.
        ZERO (str): The rate exceeds what the input alphabet supports.
        BANDWIDTH_LIMITED (str): An expected-distortion exponent limited by 2b.
        SEPARATION_REGIME (str): An expected-distortion separation regime j.
        LAST_REGIME (str): 1/b fell beyond the tabulated regimes.
    """

    FULL_DIVERSITY = "full-diversity"
    SINGLETON_LIMITED = "singleton-limited"
    ZERO = "zero"
    BANDWIDTH_LIMITED = "bandwidth-limited"
    SEPARATION_REGIME = "separation-regime"
    LAST_REGIME = "last-regime"


class SeparationRegime(str, enum.Enum):
    """
    Enumeration class representing the three cases of the separation outage bound.

    Attributes:
        ALWAYS_OUTAGE (str): D_s(b R_c) > target, the source code alone misses it.
        NEVER_OUTAGE (str): D_s(b R_c) + d0 <= target, even a channel error meets it.
        INFORMATION_OUTAGE (str): Outage iff I_H(snr) <= R_c.
    """

    ALWAYS_OUTAGE = "always-outage"
    NEVER_OUTAGE = "never-outage"
    INFORMATION_OUTAGE = "information-outage"


class ResultColumn(str, enum.Enum):
    """
    Enumeration class representing the ResultTable CSV header, in column order.
    """

    SNR_DB = "snr_db"
    INFORMED_P = "informed_p"
    INFORMED_CI_LOW = "informed_ci_low"
    INFORMED_CI_HIGH = "informed_ci_high"
    SEPARATION_P = "separation_p"
    SEPARATION_CI_LOW = "separation_ci_low"
    SEPARATION_CI_HIGH = "separation_ci_high"
    TRIALS = "trials"


result_columns = [column.value for column in ResultColumn]

probability_columns = [
    ResultColumn.INFORMED_P.value,
    ResultColumn.SEPARATION_P.value,
]

constellation_orders = {
    Constellation.BPSK: 2,
    Constellation.QPSK: 4,
    Constellation.PSK8: 8,
    Constellation.QAM16: 16,
    Constellation.QAM64: 64,
}
