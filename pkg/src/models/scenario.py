"""Scenario configuration: one validated section per subsystem."""

import math
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.models.actions import ActionKind
from src.models.telemetry import DEFAULT_INDICATORS, FaultKind

SCENARIO_FORMAT_VERSION = 1

StrategyName = Literal["CP", "RP", "SM", "AD", "Adaptive"]
STRATEGY_ORDER: tuple[StrategyName, ...] = ("CP", "RP", "SM", "AD", "Adaptive")

DEFAULT_BASELINES = {
    "cpu_util": 0.06,
    "mem_util": 0.06,
    "net_latency_norm": 0.03,
    "disk_io_norm": 0.03,
    "error_rate": 0.01,
    "queue_depth_norm": 0.03,
}
DEFAULT_LOAD_WEIGHTS = {
    "cpu_util": 0.3,
    "mem_util": 0.25,
    "net_latency_norm": 0.05,
    "disk_io_norm": 0.1,
    "error_rate": 0.0,
    "queue_depth_norm": 0.3,
}
DEFAULT_HEALTH_WEIGHTS = {
    "cpu_util": 0.15,
    "mem_util": 0.15,
    "net_latency_norm": 0.2,
    "disk_io_norm": 0.1,
    "error_rate": 0.25,
    "queue_depth_norm": 0.15,
}
DEFAULT_PRECURSORS: dict[FaultKind, list[str]] = {
    FaultKind.HARDWARE_FAILURE: ["mem_util", "disk_io_norm", "error_rate"],
    FaultKind.NETWORK_INSTABILITY: ["net_latency_norm", "error_rate", "queue_depth_norm"],
    FaultKind.RESOURCE_OVERLOAD: ["cpu_util", "mem_util", "queue_depth_norm"],
}

DEFAULT_ACTION_COSTS: dict[ActionKind, float] = {
    ActionKind.NOOP: 0.0,
    ActionKind.CHECKPOINT: 2.0,
    ActionKind.THROTTLE_LOAD: 1.0,
    ActionKind.MIGRATE_TASK: 5.0,
    ActionKind.RESTART_NODE: 8.0,
    ActionKind.FAILOVER_TO_BACKUP: 6.0,
}


def _impact_row(noop, ckpt, throttle, migrate, restart, failover) -> dict[ActionKind, float]:
    return {
        ActionKind.NOOP: noop,
        ActionKind.CHECKPOINT: ckpt,
        ActionKind.THROTTLE_LOAD: throttle,
        ActionKind.MIGRATE_TASK: migrate,
        ActionKind.RESTART_NODE: restart,
        ActionKind.FAILOVER_TO_BACKUP: failover,
    }


# Expected residual downtime per (state index, action kind)
DEFAULT_IMPACT_TABLE: dict[int, dict[ActionKind, float]] = {
    0: _impact_row(0.0, 0.0, 0.0, 0.0, 0.0, 0.0),
    1: _impact_row(2.0, 1.0, 1.5, 0.5, 3.0, 0.5),
    2: _impact_row(8.0, 5.0, 6.0, 1.0, 4.0, 1.5),
    3: _impact_row(20.0, 12.0, 15.0, 3.0, 6.0, 2.0),
    4: _impact_row(40.0, 30.0, 35.0, 8.0, 10.0, 3.0),
}


def _check_convex(weights: list[float], name: str) -> list[float]:
    if any(not math.isfinite(w) or w < 0.0 for w in weights):
        raise ValueError(f"{name} must be finite and nonnegative")
    if abs(sum(weights) - 1.0) > 1e-9:
        raise ValueError(f"{name} must sum to 1")
    return weights


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class BurstWindow(_Section):
    """A high-load regime: fault rates multiplied and baselines raised."""

    start: int = Field(..., ge=0)
    length: int = Field(..., ge=1)
    multiplier: float = Field(default=3.0, ge=1.0)
    load_boost: float = Field(default=0.2, ge=0.0, le=1.0)


class ScriptedFault(_Section):
    tick: int = Field(..., ge=0)
    node: int = Field(..., ge=0)
    kind: FaultKind = FaultKind.HARDWARE_FAILURE
    severity: float = Field(default=1.0, gt=0.0, le=1.0)
    duration: int | None = Field(default=None, ge=1)


class TelemetryConfig(_Section):
    node_count: int = Field(default=8, ge=1)
    horizon: int = Field(default=10000, ge=1, description="T, simulated ticks")
    indicators: list[str] = Field(default_factory=lambda: list(DEFAULT_INDICATORS), min_length=1)
    baselines: list[float] = Field(default_factory=list)
    noise_sigma: float = Field(default=0.05, ge=0.0)
    precursor_window: int = Field(default=10, ge=1)
    precursor_peak: float = Field(default=1.0, ge=0.0, le=1.0)
    precursor_map: dict[FaultKind, list[str]] = Field(
        default_factory=lambda: {k: list(v) for k, v in DEFAULT_PRECURSORS.items()}
    )
    load_weights: list[float] = Field(default_factory=list)
    bursts: list[BurstWindow] = Field(default_factory=list)

    @model_validator(mode="before")
    @classmethod
    def _fill_vectors(cls, data: object) -> object:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        names = list(data.get("indicators") or DEFAULT_INDICATORS)
        if data.get("baselines") is None:
            data["baselines"] = [DEFAULT_BASELINES.get(name, 0.05) for name in names]
        if data.get("load_weights") is None:
            data["load_weights"] = _named_or_uniform(DEFAULT_LOAD_WEIGHTS, names)
        return data

    @model_validator(mode="after")
    def _check_vectors(self) -> "TelemetryConfig":
        n = len(self.indicators)
        if len(set(self.indicators)) != n:
            raise ValueError("indicator names must be unique")
        if len(self.baselines) != n:
            raise ValueError(f"baselines must have {n} entries")
        if any(not 0.0 <= b <= 1.0 for b in self.baselines):
            raise ValueError("baselines must lie in [0, 1]")
        if len(self.load_weights) != n:
            raise ValueError(f"load_weights must have {n} entries")
        _check_convex(self.load_weights, "load_weights")
        for kind, names in self.precursor_map.items():
            unknown = [name for name in names if name not in self.indicators]
            if unknown:
                raise ValueError(f"precursor_map[{kind}] names unknown indicators {unknown}")
        return self

    @property
    def indicator_count(self) -> int:
        return len(self.indicators)


def _named_or_uniform(table: dict[str, float], names: list[str]) -> list[float]:
    if set(names) == set(table):
        return [table[name] for name in names]
    return [1.0 / len(names)] * len(names)


class FaultConfig(_Section):
    rate: float = Field(default=0.006, ge=0.0, description="Cluster-wide faults per tick")
    rate_scale: float = Field(default=1.0, ge=0.0)
    kind_weights: dict[FaultKind, float] = Field(
        default_factory=lambda: {
            FaultKind.HARDWARE_FAILURE: 0.4,
            FaultKind.NETWORK_INSTABILITY: 0.3,
            FaultKind.RESOURCE_OVERLOAD: 0.3,
        }
    )
    severity_min: float = Field(default=0.5, gt=0.0, le=1.0)
    severity_max: float = Field(default=1.0, gt=0.0, le=1.0)
    transient_mean_ticks: float = Field(default=20.0, ge=1.0)
    repair_mean_ticks: float = Field(default=40.0, ge=1.0)
    scripted: list[ScriptedFault] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check(self) -> "FaultConfig":
        if self.severity_min > self.severity_max:
            raise ValueError("severity_min must not exceed severity_max")
        if any(w < 0.0 for w in self.kind_weights.values()):
            raise ValueError("kind_weights must be nonnegative")
        if self.rate > 0 and sum(self.kind_weights.values()) <= 0.0:
            raise ValueError("kind_weights must not all be zero")
        return self


class PredictorConfig(_Section):
    threshold: float = Field(default=0.7, description="θ, warning threshold")
    horizon: int = Field(default=10, ge=1, description="H, fault horizon in ticks")
    learning_rate: float = Field(default=1.0, gt=0.0)
    epochs: int = Field(default=3000, ge=1)
    hidden_sizes: list[int] = Field(default_factory=lambda: [8])
    training_seeds: list[int] = Field(default_factory=lambda: [1000], min_length=1)
    training_horizon: int | None = Field(default=5000, ge=1)

    @field_validator("threshold")
    @classmethod
    def _check_threshold(cls, value: float) -> float:
        if not (0.0 < value < 1.0):
            raise ValueError("threshold θ must lie strictly within (0, 1)")
        return value

    @field_validator("hidden_sizes")
    @classmethod
    def _check_hidden(cls, sizes: list[int]) -> list[int]:
        if any(size < 0 for size in sizes):
            raise ValueError("hidden_sizes must be nonnegative")
        return [size for size in sizes if size > 0]


class SchedulerConfig(_Section):
    alpha: float = Field(default=1.0, ge=0.0)
    beta: float = Field(default=0.5, ge=0.0)
    min_interval: int = Field(default=5, ge=1)
    max_interval: int = Field(default=200, ge=1)

    @model_validator(mode="after")
    def _check(self) -> "SchedulerConfig":
        if self.min_interval > self.max_interval:
            raise ValueError("min_interval must not exceed max_interval")
        if self.alpha + self.beta <= 0.0:
            raise ValueError("alpha + beta must be positive")
        return self


class AnomalyConfig(_Section):
    decay: float = Field(default=1.0, gt=0.0, description="λ, attenuation factor")
    state_count: int = Field(default=5, ge=2)
    anomaly_floor: float = Field(default=0.05, ge=0.0, lt=1.0, description="ε")
    health_weights: list[float] = Field(
        default_factory=lambda: [DEFAULT_HEALTH_WEIGHTS[n] for n in DEFAULT_INDICATORS]
    )

    @model_validator(mode="after")
    def _check(self) -> "AnomalyConfig":
        if self.anomaly_floor >= 1.0 / self.state_count:
            raise ValueError("anomaly_floor ε must be below 1/state_count")
        _check_convex(self.health_weights, "health_weights")
        return self


class MitigatorConfig(_Section):
    lambda1: float = Field(default=1.0, ge=0.0)
    lambda2: float = Field(default=2.0, ge=0.0)
    eta: float = Field(default=0.8, description="η, failover success threshold")
    prior: float = Field(default=1.0, gt=0.0)
    action_cost_table: dict[ActionKind, float] = Field(
        default_factory=lambda: dict(DEFAULT_ACTION_COSTS)
    )
    impact_table: dict[int, dict[ActionKind, float]] = Field(
        default_factory=lambda: {s: dict(row) for s, row in DEFAULT_IMPACT_TABLE.items()}
    )

    @model_validator(mode="after")
    def _check(self) -> "MitigatorConfig":
        if self.lambda1 + self.lambda2 <= 0.0:
            raise ValueError("lambda1 + lambda2 must be positive")
        if not (0.0 < self.eta < 1.0):
            raise ValueError("eta η must lie strictly within (0, 1)")
        return self


class CostTable(_Section):
    """Overhead cost units charged by the simulator."""

    checkpoint: int = Field(default=20, ge=0)
    migration: int = Field(default=50, ge=0)
    failover: int = Field(default=60, ge=0)
    restart: int = Field(default=40, ge=0)
    throttle: int = Field(default=10, ge=0)
    replica_build: int = Field(default=20, ge=0)
    replica_upkeep: int = Field(default=1, ge=0)
    prediction: int = Field(default=1, ge=0)


class SimulationConfig(_Section):
    task_count: int = Field(default=4, ge=1)
    c_save: int = Field(default=2, ge=1)
    c_restore: int = Field(default=3, ge=0)
    c_migrate: int = Field(default=2, ge=1)
    failover_ticks: int = Field(default=1, ge=1)
    restart_ticks: int = Field(default=3, ge=1)
    cold_start_ticks: int = Field(default=2, ge=0)
    throttle_ticks: int = Field(default=20, ge=1)
    costs: CostTable = Field(default_factory=CostTable)


class StrategiesConfig(_Section):
    enabled: list[StrategyName] = Field(default_factory=lambda: list(STRATEGY_ORDER), min_length=1)
    cp_interval: int = Field(default=20, ge=1, description="τ")
    rp_replicas: int = Field(default=2, ge=1, description="k")
    sm_threshold: int = Field(default=2, ge=1, description="Stressed")
    ad_threshold: float = Field(default=0.7)

    @field_validator("ad_threshold")
    @classmethod
    def _check_threshold(cls, value: float) -> float:
        if not (0.0 < value < 1.0):
            raise ValueError("ad_threshold θ must lie strictly within (0, 1)")
        return value

    @field_validator("enabled")
    @classmethod
    def _canonical_order(cls, names: list[StrategyName]) -> list[StrategyName]:
        return [name for name in STRATEGY_ORDER if name in names]


class ExperimentConfig(_Section):
    seeds: list[int] = Field(default_factory=lambda: list(range(10)), min_length=1)
    fault_sweep: list[float] = Field(default_factory=list)
    output_dir: Path | None = None

    @field_validator("fault_sweep")
    @classmethod
    def _check_sweep(cls, scales: list[float]) -> list[float]:
        if any(s < 0.0 for s in scales):
            raise ValueError("fault_sweep scales must be nonnegative")
        return scales


class ScenarioConfig(_Section):
    """Complete, validated description of one experiment."""

    format_version: int = SCENARIO_FORMAT_VERSION
    name: str = "default"
    telemetry: TelemetryConfig = Field(default_factory=TelemetryConfig)
    faults: FaultConfig = Field(default_factory=FaultConfig)
    predictor: PredictorConfig = Field(default_factory=PredictorConfig)
    scheduler: SchedulerConfig = Field(default_factory=SchedulerConfig)
    anomaly: AnomalyConfig = Field(default_factory=AnomalyConfig)
    mitigator: MitigatorConfig = Field(default_factory=MitigatorConfig)
    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    strategies: StrategiesConfig = Field(default_factory=StrategiesConfig)
    experiment: ExperimentConfig = Field(default_factory=ExperimentConfig)

    @model_validator(mode="after")
    def _cross_check(self) -> "ScenarioConfig":
        if self.format_version != SCENARIO_FORMAT_VERSION:
            raise ValueError(f"unsupported format_version {self.format_version}")
        n = self.telemetry.indicator_count
        if len(self.anomaly.health_weights) != n:
            raise ValueError(f"anomaly.health_weights must have {n} entries")
        if self.simulation.task_count > self.telemetry.node_count:
            raise ValueError("simulation.task_count must not exceed telemetry.node_count")
        for fault in self.faults.scripted:
            if fault.node >= self.telemetry.node_count:
                raise ValueError(f"scripted fault targets unknown node {fault.node}")
            if fault.tick >= self.telemetry.horizon:
                raise ValueError(f"scripted fault tick {fault.tick} beyond horizon")
        overlap = set(self.predictor.training_seeds) & set(self.experiment.seeds)
        if overlap:
            raise ValueError(f"training seeds overlap evaluation seeds: {sorted(overlap)}")
        return self

    @property
    def node_count(self) -> int:
        return self.telemetry.node_count

    @property
    def horizon(self) -> int:
        return self.telemetry.horizon

    @property
    def fault_horizon(self) -> int:
        return self.predictor.horizon

    @property
    def seeds(self) -> list[int]:
        return self.experiment.seeds

    def with_fault_scale(self, scale: float) -> "ScenarioConfig":
        """Copy of this scenario with the fault process rescaled."""
        faults = self.faults.model_copy(update={"rate_scale": scale})
        return self.model_copy(update={"faults": faults})
