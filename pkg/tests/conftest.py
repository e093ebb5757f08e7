import pytest

from distout.model import (
    ChannelInput,
    DistortionSpec,
    Scenario,
    SourceModel,
    SystemConfig,
    optimal_separation_rate,
)


def make_scenario(
    n_t: int = 2,
    n_r: int = 2,
    N: int = 1,
    channel_input: ChannelInput | None = None,
    b: float = 2.0,
    D_bar: float = 0.05,
    d0: float = 0.5,
    R_c: float | str | None = "optimal",
    snr_grid_db: tuple[float, ...] = (0.0, 10.0, 20.0),
    trials: int = 2000,
    seed: int = 20240501,
    confidence: float = 0.95,
    **extra,
) -> Scenario:
    if R_c == "optimal":
        R_c = optimal_separation_rate(D_bar, b)
    return Scenario(
        config=SystemConfig(n_t=n_t, n_r=n_r, N=N),
        input=channel_input or ChannelInput.gaussian(),
        source=SourceModel(b=b),
        distortion=DistortionSpec(D_bar=D_bar, d0=d0),
        R_c=R_c,
        snr_grid_db=snr_grid_db,
        trials=trials,
        seed=seed,
        confidence=confidence,
        **extra,
    )


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return f'"{value}"'
    return repr(value)


def scenario_text(sections: dict[str, dict]) -> str:
    lines = []
    for section, values in sections.items():
        lines.append(f"[{section}]")
        lines += [f"{key} = {_toml_value(value)}" for key, value in values.items()]
        lines.append("")
    return "\n".join(lines)


def fig3_sections(**sweep) -> dict[str, dict]:
    """The 2x2 Gaussian-input scenario with b=2, d0=0.5, D_bar=0.05 and R_c*."""
    return {
        "system": {"nt": 2, "nr": 2, "blocks": 1},
        "input": {"kind": "gaussian"},
        "source": {"bandwidth_ratio": 2.0},
        "distortion": {"target": 0.05, "d0": 0.5},
        "separation": {"rate": "optimal"},
        "sweep": {
            "snr_db_start": 0.0,
            "snr_db_stop": 20.0,
            "snr_db_step": 5.0,
            "trials": 3000,
            "seed": 7,
            "confidence": 0.95,
            **sweep,
        },
    }


@pytest.fixture
def fig3_scenario() -> Scenario:
    return make_scenario(snr_grid_db=(0.0, 5.0, 10.0, 15.0), trials=20000)


@pytest.fixture
def write_scenario(tmp_path):
    """Writes a scenario file built from section dicts and returns its path."""

    def _write(sections: dict[str, dict], name: str = "scenario.toml"):
        path = tmp_path / name
        path.write_text(scenario_text(sections), encoding="utf-8")
        return path

    return _write
