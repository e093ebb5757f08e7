import os

from typing import Type

from pydantic_settings import BaseSettings, SettingsConfigDict


class General(BaseSettings):
    # GENERAL SETTINGS
    LOCALE: str = "en_US"
    ENV: str = "dev"
    LOG_LEVEL: str = "INFO"

    # MONTE CARLO SETTINGS
    # overridden by DISTOUT_WORKERS
    WORKERS: int = 1
    # trials evaluated per vectorized batch inside a worker
    BATCH_SIZE: int = 20000
    DEFAULT_CONFIDENCE: float = 0.95

    # MUTUAL INFORMATION SETTINGS
    MI_NOISE_SAMPLES: int = 2000
    MI_SEED: int = 0x5EED
    MAX_JOINT_VECTORS: int = 2**16

    # EXPONENT SETTINGS
    FLOOR_TOLERANCE: float = 1e-9
    ORACLE_GRID_POINTS: int = 10_000
    # "lo,hi" in dB; used by the sweep command when --window-db is absent
    SLOPE_WINDOW_DB: str | None = None

    # REPORTING SETTINGS
    CSV_FLOAT_FORMAT: str = "%.17g"
    FIGURE_WIDTH: int = 720
    FIGURE_HEIGHT: int = 480

    model_config = SettingsConfigDict(
        case_sensitive=False, env_prefix="DISTOUT_", env_file=".env", extra="ignore"
    )


class Dev(General):
    model_config = SettingsConfigDict(
        case_sensitive=False, env_prefix="DISTOUT_", env_file=".env", extra="ignore"
    )


class Test(General):
    ENV: str = "test"
    BATCH_SIZE: int = 5000
    model_config = SettingsConfigDict(
        case_sensitive=False,
        env_prefix="DISTOUT_",
        env_file=".env_test",
        extra="ignore",
    )


env_settings: dict[str, Type[General]] = {"dev": Dev, "test": Test}
settings: Dev | Test = env_settings[os.environ.get("DISTOUT_ENV", "dev").lower()]()


def logging_config(level: str | None = None) -> dict:
    """Returns the dictConfig used by the command line entry point."""
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "generic": {
                "format": "%(asctime)s %(levelname)-5.5s [%(name)s] %(message)s",
                "datefmt": "%H:%M:%S",
            }
        },
        "handlers": {
            "console": {
                "class": "logging.StreamHandler",
                "formatter": "generic",
                "stream": "ext://sys.stderr",
            }
        },
        "loggers": {
            "distout": {
                "handlers": ["console"],
                "level": (level or settings.LOG_LEVEL).upper(),
                "propagate": False,
            }
        },
    }
