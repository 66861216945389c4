"""Simulation state, event log and report models."""

from dataclasses import dataclass, field
from src.models._compat import StrEnum
from typing import Any

from pydantic import BaseModel, Field


class NodeStatus(StrEnum):
    UP = "Up"
    RECOVERING = "Recovering"
    DOWN = "Down"


class EventKind(StrEnum):
    METRIC_TICK = "MetricTick"
    FAULT_START = "FaultStart"
    FAULT_END = "FaultEnd"
    CHECKPOINT_START = "CheckpointStart"
    CHECKPOINT_DONE = "CheckpointDone"
    RECOVERY_START = "RecoveryStart"
    RECOVERY_DONE = "RecoveryDone"
    MIGRATION = "Migration"
    FAILOVER = "Failover"
    WARNING = "Warning"
    ANOMALY_FLAG = "AnomalyFlag"
    DECISION = "Decision"


@dataclass(frozen=True, slots=True)
class SimEvent:
    """One entry of the event log, ordered by (tick, seq)."""

    tick: int
    seq: int
    kind: EventKind
    payload: dict[str, Any]

    def to_record(self) -> dict[str, Any]:
        return {"tick": self.tick, "seq": self.seq, "kind": str(self.kind), "payload": self.payload}


@dataclass
class NodeState:
    """Mutable per-node state owned by a single simulation run."""

    node_id: int
    status: NodeStatus = NodeStatus.UP
    tasks: set[int] = field(default_factory=set)
    last_checkpoint_tick: dict[int, int] = field(default_factory=dict)
    replica_of: set[int] = field(default_factory=set)
    down_until: int | None = None
    recovering_until: int | None = None
    throttled_until: int = -1
    # kind -> (severity, exclusive end tick) of active transient faults
    effects: dict[str, tuple[float, int]] = field(default_factory=dict)

    @property
    def is_up(self) -> bool:
        return self.status is NodeStatus.UP


class ConfusionCounts(BaseModel):
    """Warnings versus labeled windows."""

    tp: int = Field(default=0, ge=0)
    fp: int = Field(default=0, ge=0)
    tn: int = Field(default=0, ge=0)
    fn: int = Field(default=0, ge=0)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def accuracy(self) -> float:
        if self.total == 0:
            return 1.0
        return (self.tp + self.tn) / self.total


@dataclass
class SimMetrics:
    """Metrics derived from an event log."""

    recovery_times: dict[int, int] = field(default_factory=dict)
    censored_faults: list[int] = field(default_factory=list)
    total_downtime: int = 0
    overhead_cost: int = 0
    confusion: ConfusionCounts = field(default_factory=ConfusionCounts)
    fault_count: int = 0

    @property
    def mean_recovery_time(self) -> float:
        if not self.recovery_times:
            return 0.0
        return sum(self.recovery_times.values()) / len(self.recovery_times)

    @property
    def max_recovery_time(self) -> int:
        return max(self.recovery_times.values(), default=0)


@dataclass
class SimReport:
    """Full result of one simulation run."""

    strategy: str
    seed: int
    events: list[SimEvent]
    metrics: SimMetrics

    @property
    def recovery_times(self) -> dict[int, int]:
        return self.metrics.recovery_times

    @property
    def total_downtime(self) -> int:
        return self.metrics.total_downtime

    @property
    def overhead_cost(self) -> int:
        return self.metrics.overhead_cost

    @property
    def confusion(self) -> ConfusionCounts:
        return self.metrics.confusion
