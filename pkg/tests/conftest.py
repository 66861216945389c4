"""Shared fixtures: small scenarios that simulate in well under a second."""

from pathlib import Path

import numpy as np
import pytest
import yaml

from src.models.scenario import ScenarioConfig
from src.models.telemetry import DEFAULT_INDICATORS, FaultEventSpec, TelemetryTrace
from src.predictor.model import PredictorWeights
from src.predictor.trainer import train_for_scenario

SMALL = {
    "name": "small",
    "telemetry": {"node_count": 6, "horizon": 300},
    "faults": {"rate": 0.03},
    "predictor": {"epochs": 150, "training_horizon": 400, "training_seeds": [1000]},
    "simulation": {"task_count": 2},
    "experiment": {"seeds": [0, 1]},
}


def make_scenario(**sections) -> ScenarioConfig:
    """SMALL with whole sections replaced or merged key by key."""
    data = {key: dict(value) if isinstance(value, dict) else value for key, value in SMALL.items()}
    for key, value in sections.items():
        if isinstance(value, dict) and isinstance(data.get(key), dict):
            data[key].update(value)
        else:
            data[key] = value
    return ScenarioConfig.model_validate(data)


def write_yaml(path: Path, data: dict) -> Path:
    path.write_text(yaml.safe_dump(data, sort_keys=False), encoding="utf-8")
    return path


def blank_trace(
    ticks: int,
    nodes: int,
    faults: tuple[FaultEventSpec, ...] = (),
    seed: int = 0,
    level: float = 0.0,
) -> TelemetryTrace:
    """Flat telemetry at ``level`` with a hand-written fault schedule."""
    values = np.full((ticks, nodes, len(DEFAULT_INDICATORS)), level)
    values.setflags(write=False)
    return TelemetryTrace(
        indicators=tuple(DEFAULT_INDICATORS),
        values=values,
        fault_schedule=faults,
        seed=seed,
    )


def constant_weights(bias: float, first_weight: float = 0.0) -> PredictorWeights:
    """Logistic model with no hidden layer: σ(first_weight·x_0 + bias)."""
    output = np.zeros(len(DEFAULT_INDICATORS))
    output[0] = first_weight
    return PredictorWeights((), output, bias)


@pytest.fixture
def small_scenario() -> ScenarioConfig:
    return make_scenario()


@pytest.fixture
def quiet_scenario() -> ScenarioConfig:
    """No faults at all."""
    return make_scenario(faults={"rate": 0.0})


@pytest.fixture
def single_fault_scenario() -> ScenarioConfig:
    """One hardware failure on the host of task 0 at tick 57, noise-free telemetry."""
    return make_scenario(
        telemetry={"node_count": 4, "horizon": 200, "noise_sigma": 0.0},
        faults={
            "rate": 0.0,
            "scripted": [
                {"tick": 57, "node": 0, "kind": "HardwareFailure", "duration": 30},
            ],
        },
        simulation={"task_count": 1, "c_restore": 3},
        strategies={"cp_interval": 20},
    )


@pytest.fixture(scope="session")
def small_weights() -> PredictorWeights:
    return train_for_scenario(make_scenario()).weights
