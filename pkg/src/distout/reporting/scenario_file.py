"""
TOML scenario files.

    [system]      nt, nr, blocks
    [input]       kind = "gaussian" | "discrete", constellation, m
    [source]      bandwidth_ratio
    [distortion]  target, d0
    [separation]  rate = <number> | "optimal"
    [sweep]       snr_db_start, snr_db_stop, snr_db_step, trials, seed, confidence
    [mutual_info] noise_samples, seed                      (optional)

Unknown sections and keys are rejected. An "optimal" rate is resolved at load
time and echoed in every output.
"""

from __future__ import annotations

import logging
import math
import re
import tomllib

from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from distout.config import settings
from distout.enumerations import Constellation, InputKind
from distout.errors import DistoutError, ScenarioFileError
from distout.model import (
    ChannelInput,
    DistortionSpec,
    MiEstimatorSettings,
    Scenario,
    SourceModel,
    SystemConfig,
    optimal_separation_rate,
    separation_regime,
)


logger = logging.getLogger(__name__)

OPTIMAL = "optimal"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class SystemSection(_Section):
    nt: int = Field(ge=1)
    nr: int = Field(ge=1)
    blocks: int = Field(ge=1)


class InputSection(_Section):
    kind: InputKind
    constellation: Optional[Constellation] = None
    m: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def check_constellation(self) -> "InputSection":
        if self.kind == InputKind.GAUSSIAN and self.constellation is not None:
            raise ValueError("Gaussian input takes no constellation")
        if self.kind == InputKind.DISCRETE and self.constellation is None:
            raise ValueError("Discrete input needs a constellation")
        return self


class SourceSection(_Section):
    bandwidth_ratio: float = Field(gt=0, allow_inf_nan=False)


class DistortionSection(_Section):
    target: float = Field(gt=0, le=1)
    d0: float = Field(default=0.5, gt=0, allow_inf_nan=False)


class SeparationSection(_Section):
    rate: Union[Literal["optimal"], float]


class SweepSection(_Section):
    snr_db_start: float = Field(allow_inf_nan=False)
    snr_db_stop: float = Field(allow_inf_nan=False)
    snr_db_step: float = Field(gt=0, allow_inf_nan=False)
    trials: int = Field(ge=1)
    seed: int = Field(ge=0, lt=2**64)
    confidence: float = Field(default=settings.DEFAULT_CONFIDENCE, gt=0, lt=1)

    def grid(self) -> tuple[float, ...]:
        if self.snr_db_stop < self.snr_db_start:
            raise ValueError("snr_db_stop is below snr_db_start")
        count = int(math.floor((self.snr_db_stop - self.snr_db_start) / self.snr_db_step + 1e-9)) + 1
        return tuple(
            round(self.snr_db_start + k * self.snr_db_step, 12) for k in range(count)
        )


class MutualInfoSection(_Section):
    noise_samples: int = Field(default=settings.MI_NOISE_SAMPLES, ge=1)
    seed: int = Field(default=settings.MI_SEED, ge=0, lt=2**64)


class ScenarioFile(_Section):
    system: SystemSection
    input: InputSection
    source: SourceSection
    distortion: DistortionSection
    separation: Optional[SeparationSection] = None
    sweep: SweepSection
    mutual_info: MutualInfoSection = MutualInfoSection()

    @property
    def rate_is_optimal(self) -> bool:
        return self.separation is not None and self.separation.rate == OPTIMAL

    def channel_input(self) -> ChannelInput:
        if self.input.kind == InputKind.GAUSSIAN:
            return ChannelInput.gaussian()
        channel_input = ChannelInput.from_constellation(self.input.constellation)
        if self.input.m is not None and self.input.m != channel_input.m:
            raise ScenarioFileError(
                f"m = {self.input.m} disagrees with {self.input.constellation.value} "
                f"(m = {channel_input.m})",
                "SCENARIO_M_MISMATCH",
            )
        return channel_input

    def resolved_rate(self) -> float | None:
        if self.separation is None:
            return None
        if self.rate_is_optimal:
            return optimal_separation_rate(
                self.distortion.target, self.source.bandwidth_ratio
            )
        return float(self.separation.rate)

    def to_scenario(self) -> Scenario:
        return Scenario(
            config=SystemConfig(n_t=self.system.nt, n_r=self.system.nr, N=self.system.blocks),
            input=self.channel_input(),
            source=SourceModel(b=self.source.bandwidth_ratio),
            distortion=DistortionSpec(D_bar=self.distortion.target, d0=self.distortion.d0),
            R_c=self.resolved_rate(),
            snr_grid_db=self.sweep.grid(),
            trials=self.sweep.trials,
            seed=self.sweep.seed,
            confidence=self.sweep.confidence,
            mi=MiEstimatorSettings(
                noise_samples=self.mutual_info.noise_samples,
                mi_seed=self.mutual_info.seed,
            ),
        )


class LoadedScenario(BaseModel):
    model_config = ConfigDict(frozen=True)

    source_file: ScenarioFile
    scenario: Scenario
    path: str = "<string>"


def _locate(text: str, loc: tuple) -> int | None:
    """Line number of the key named by a validation error location, if found."""
    lines = text.splitlines()
    section = str(loc[0]) if loc else None
    key = str(loc[1]) if len(loc) > 1 else None
    in_section = False
    section_line = None
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if stripped.startswith("["):
            in_section = stripped.strip("[] ") == section
            if in_section:
                section_line = number
            continue
        if in_section and key and re.match(rf"{re.escape(key)}\s*=", stripped):
            return number
    return section_line


def parse_scenario(text: str, path: str = "<string>") -> LoadedScenario:
    try:
        document = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        match = re.search(r"line (\d+)", str(e))
        raise ScenarioFileError(
            f"{path}: {e}", "SCENARIO_SYNTAX", int(match.group(1)) if match else None
        ) from e
    try:
        source_file = ScenarioFile.model_validate(document)
        scenario = source_file.to_scenario()
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        raise ScenarioFileError(
            f"{path}: {where}: {first['msg']}",
            "SCENARIO_INVALID",
            _locate(text, first["loc"]),
        ) from e
    except ScenarioFileError as e:
        raise ScenarioFileError(
            f"{path}: {e.message}", e.error_code, _locate(text, ("input", "m"))
        ) from e
    except DistoutError as e:
        raise ScenarioFileError(f"{path}: {e.message}", e.error_code) from e
    except ValueError as e:
        raise ScenarioFileError(f"{path}: {e}", "SCENARIO_INVALID", _locate(text, ("sweep",))) from e
    if source_file.rate_is_optimal:
        logger.info("Resolved optimal separation rate R_c* = %.6f", scenario.R_c)
    return LoadedScenario(source_file=source_file, scenario=scenario, path=path)


def load_scenario(path: str | Path) -> LoadedScenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioFileError(f"Cannot read {path}: {e.strerror}", "SCENARIO_IO") from e
    return parse_scenario(text, str(path))


def scenario_metadata(loaded: LoadedScenario) -> list[tuple[str, str]]:
    """Key/value pairs echoed into every output artifact."""
    scenario = loaded.scenario
    pairs = [
        ("scenario", Path(loaded.path).name),
        ("system", str(scenario.config)),
        ("input", str(scenario.input)),
        ("bandwidth_ratio", repr(scenario.source.b)),
        ("target_distortion", repr(scenario.distortion.D_bar)),
        ("d0", repr(scenario.distortion.d0)),
        ("informed_threshold", repr(scenario.informed_threshold)),
    ]
    if scenario.R_c is not None:
        regime = separation_regime(scenario.distortion, scenario.source.b, scenario.R_c)
        pairs += [
            ("separation_rate", repr(scenario.R_c)),
            ("separation_rate_source", OPTIMAL if loaded.source_file.rate_is_optimal else "fixed"),
            ("separation_regime", regime.value),
        ]
    pairs += [
        ("trials", str(scenario.trials)),
        ("seed", str(scenario.seed)),
        ("confidence", repr(scenario.confidence)),
    ]
    if not scenario.input.is_gaussian:
        pairs += [
            ("mi_noise_samples", str(scenario.mi.noise_samples)),
            ("mi_seed", str(scenario.mi.mi_seed)),
        ]
    return pairs
