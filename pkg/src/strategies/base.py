"""Strategy interface: what a controller sees each tick and what it returns."""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, ClassVar

import numpy as np

from src.models.actions import Action, BackupResource, DiscreteState
from src.models.simulation import NodeStatus
from src.models.telemetry import MetricVector, SystemLoad


@dataclass(frozen=True, slots=True)
class TaskView:
    """Read-only snapshot of one task."""

    task_id: int
    host: int | None
    available: bool
    busy: bool
    last_checkpoint_tick: int
    replicas: tuple[int, ...] = ()


@dataclass(frozen=True)
class Observation:
    """Everything a strategy may look at during one tick.

    ``values`` is the (nodes, indicators) telemetry row of this tick; ``states``
    and ``loads`` are derived from it per node.
    """

    tick: int
    values: np.ndarray
    states: np.ndarray
    loads: np.ndarray
    system_load: SystemLoad
    statuses: tuple[NodeStatus, ...]
    tasks: tuple[TaskView, ...]
    backups: tuple[BackupResource, ...]
    previous_states: np.ndarray | None = None

    @property
    def node_count(self) -> int:
        return len(self.statuses)

    def vector(self, node: int) -> MetricVector:
        return MetricVector(tick=self.tick, values=tuple(float(v) for v in self.values[node]))

    def state(self, node: int) -> DiscreteState:
        return DiscreteState(int(self.states[node]))

    def previous_state(self, node: int) -> DiscreteState | None:
        if self.previous_states is None:
            return None
        return DiscreteState(int(self.previous_states[node]))

    def is_up(self, node: int) -> bool:
        return self.statuses[node] is NodeStatus.UP

    def tasks_on(self, node: int) -> list[TaskView]:
        return [t for t in self.tasks if t.host == node]

    def task_counts(self) -> list[int]:
        counts = [0] * self.node_count
        for task in self.tasks:
            if task.host is not None:
                counts[task.host] += 1
        return counts

    def least_loaded(self, exclude: set[int]) -> int | None:
        """Up node outside ``exclude`` with the fewest tasks, then lowest state, then id."""
        counts = self.task_counts()
        candidates = [n for n in range(self.node_count) if self.is_up(n) and n not in exclude]
        if not candidates:
            return None
        return min(candidates, key=lambda n: (counts[n], int(self.states[n]), n))


@dataclass
class StrategyDecision:
    """What a strategy wants done this tick, plus what it logged while deciding."""

    actions: list[Action] = field(default_factory=list)
    # node -> fault probability for every warned node
    warnings: dict[int, float] = field(default_factory=dict)
    # node -> (from state, to state, transition probability)
    anomalies: dict[int, tuple[int, int, float]] = field(default_factory=dict)
    # task -> full desired replica node list
    replicas: dict[int, list[int]] = field(default_factory=dict)
    records: list[dict[str, Any]] = field(default_factory=list)


class Strategy(ABC):
    """A fault-tolerance controller owned by a single simulation run."""

    name: ClassVar[str]
    uses_predictor: ClassVar[bool] = False
    # the standby pool is only built for strategies that read it
    uses_backups: ClassVar[bool] = False

    @abstractmethod
    def decide(self, obs: Observation) -> StrategyDecision:
        """Decide this tick's actions."""

    def on_failure(self, obs: Observation, node: int, tasks: list[int]) -> list[Action]:
        """Place tasks lost with ``node``; an empty list means default placement."""
        return []
