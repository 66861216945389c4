"""Fault-tolerance strategies."""

from src.strategies.adaptive import AdaptiveController
from src.strategies.base import Observation, Strategy, StrategyDecision, TaskView
from src.strategies.baselines import (
    PeriodicCheckpoint,
    PredictiveCheckpoint,
    Replication,
    StateMigration,
    periodic_checkpoints,
)
from src.strategies.registry import StrategyKind, build_strategy, resolve_kind

__all__ = [
    "Observation",
    "TaskView",
    "Strategy",
    "StrategyDecision",
    "StrategyKind",
    "build_strategy",
    "resolve_kind",
    "PeriodicCheckpoint",
    "Replication",
    "StateMigration",
    "PredictiveCheckpoint",
    "AdaptiveController",
    "periodic_checkpoints",
]
