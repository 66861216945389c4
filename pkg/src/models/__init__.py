"""Data models package."""

from src.models.actions import HEALTHY, Action, ActionKind, BackupResource, DiscreteState
from src.models.scenario import STRATEGY_ORDER, ScenarioConfig
from src.models.simulation import (
    ConfusionCounts,
    EventKind,
    NodeState,
    NodeStatus,
    SimEvent,
    SimMetrics,
    SimReport,
)
from src.models.telemetry import (
    FaultEventSpec,
    FaultKind,
    LabeledWindow,
    MetricVector,
    SystemLoad,
    TelemetryTrace,
)

__all__ = [
    "MetricVector",
    "SystemLoad",
    "FaultKind",
    "FaultEventSpec",
    "LabeledWindow",
    "TelemetryTrace",
    "DiscreteState",
    "HEALTHY",
    "ActionKind",
    "Action",
    "BackupResource",
    "ScenarioConfig",
    "STRATEGY_ORDER",
    "NodeStatus",
    "EventKind",
    "SimEvent",
    "NodeState",
    "ConfusionCounts",
    "SimMetrics",
    "SimReport",
]
