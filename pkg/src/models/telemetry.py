"""Telemetry data models: indicator vectors, faults and traces."""

import math
from dataclasses import dataclass
from src.models._compat import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

DEFAULT_INDICATORS: tuple[str, ...] = (
    "cpu_util",
    "mem_util",
    "net_latency_norm",
    "disk_io_norm",
    "error_rate",
    "queue_depth_norm",
)


class FaultKind(StrEnum):
    """Fault taxonomy: permanent node loss versus transient degradation."""

    HARDWARE_FAILURE = "HardwareFailure"
    NETWORK_INSTABILITY = "NetworkInstability"
    RESOURCE_OVERLOAD = "ResourceOverload"


# Schedule tie-break order for faults on the same (tick, node)
FAULT_KIND_ORDER = {kind: i for i, kind in enumerate(FaultKind)}


class MetricVector(BaseModel):
    """Normalized performance indicators of one node at one tick."""

    model_config = ConfigDict(frozen=True)

    tick: int = Field(..., ge=0)
    values: tuple[float, ...]

    @field_validator("values")
    @classmethod
    def _check_range(cls, values: tuple[float, ...]) -> tuple[float, ...]:
        for i, v in enumerate(values):
            if not math.isfinite(v) or v < 0.0 or v > 1.0:
                raise ValueError(f"indicator {i} = {v} outside [0, 1]")
        return values

    @property
    def dimension(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)


class SystemLoad(BaseModel):
    """Scalar load I_t in [0, 1]."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., ge=0.0, le=1.0, allow_inf_nan=False)


class FaultEventSpec(BaseModel):
    """One scheduled fault injection."""

    model_config = ConfigDict(frozen=True)

    tick: int = Field(..., ge=0)
    kind: FaultKind
    target_node: int = Field(..., ge=0)
    severity: float = Field(..., gt=0.0, le=1.0, allow_inf_nan=False)
    duration: int = Field(default=1, ge=1)

    @property
    def end_tick(self) -> int:
        """Exclusive end of the fault's active period."""
        return self.tick + self.duration

    def sort_key(self) -> tuple[int, int, int]:
        return (self.tick, self.target_node, FAULT_KIND_ORDER[self.kind])


class LabeledWindow(BaseModel):
    """Training example: an observation and whether a fault follows within H ticks."""

    model_config = ConfigDict(frozen=True)

    node: int
    features: MetricVector
    label: bool


@dataclass(frozen=True, eq=False)
class TelemetryTrace:
    """Per-node indicator series plus the ground-truth fault schedule.

    ``values`` has shape (ticks, nodes, indicators) and is read-only.
    """

    indicators: tuple[str, ...]
    values: np.ndarray
    fault_schedule: tuple[FaultEventSpec, ...]
    seed: int

    @property
    def horizon(self) -> int:
        return int(self.values.shape[0])

    @property
    def node_count(self) -> int:
        return int(self.values.shape[1])

    @property
    def indicator_count(self) -> int:
        return int(self.values.shape[2])

    def vector(self, node: int, tick: int) -> MetricVector:
        return MetricVector(tick=tick, values=tuple(float(v) for v in self.values[tick, node]))

    def faults_for(self, node: int) -> list[FaultEventSpec]:
        return [f for f in self.fault_schedule if f.target_node == node]

    def identical_to(self, other: "TelemetryTrace") -> bool:
        """Bit-level equality of values, schedule and seed."""
        return (
            self.indicators == other.indicators
            and self.seed == other.seed
            and self.values.shape == other.values.shape
            and self.values.tobytes() == other.values.tobytes()
            and self.fault_schedule == other.fault_schedule
        )
