"""Health states, mitigation actions and standby resources."""

from dataclasses import dataclass
from src.models._compat import StrEnum

from pydantic import BaseModel, ConfigDict, Field, model_validator

HEALTH_STATE_NAMES: tuple[str, ...] = ("Healthy", "Degraded", "Stressed", "Critical", "Failed")


@dataclass(frozen=True, slots=True, order=True)
class DiscreteState:
    """Ordinal health level; 0 is Healthy, S-1 is the worst."""

    index: int

    @property
    def name(self) -> str:
        if self.index < len(HEALTH_STATE_NAMES):
            return HEALTH_STATE_NAMES[self.index]
        return f"S{self.index}"


HEALTHY = DiscreteState(0)


class ActionKind(StrEnum):
    NOOP = "NoOp"
    CHECKPOINT = "Checkpoint"
    MIGRATE_TASK = "MigrateTask"
    FAILOVER_TO_BACKUP = "FailoverToBackup"
    THROTTLE_LOAD = "ThrottleLoad"
    RESTART_NODE = "RestartNode"


# Tie-break order used by action selection
ACTION_TIE_ORDER: tuple[ActionKind, ...] = (
    ActionKind.NOOP,
    ActionKind.CHECKPOINT,
    ActionKind.THROTTLE_LOAD,
    ActionKind.MIGRATE_TASK,
    ActionKind.RESTART_NODE,
    ActionKind.FAILOVER_TO_BACKUP,
)
ACTION_RANK = {kind: i for i, kind in enumerate(ACTION_TIE_ORDER)}

_NEEDS_DESTINATION = frozenset({ActionKind.MIGRATE_TASK, ActionKind.FAILOVER_TO_BACKUP})


class Action(BaseModel):
    """A mitigation or recovery move against one node (and optionally one task)."""

    model_config = ConfigDict(frozen=True)

    kind: ActionKind
    target: int = Field(..., ge=0)
    destination: int | None = Field(default=None, ge=0)
    task: int | None = None

    @model_validator(mode="after")
    def _check_destination(self) -> "Action":
        if self.kind in _NEEDS_DESTINATION:
            if self.destination is None:
                raise ValueError(f"{self.kind} requires a destination")
            if self.destination == self.target:
                raise ValueError("destination must differ from target")
        elif self.destination is not None:
            raise ValueError(f"{self.kind} takes no destination")
        return self

    def tie_key(self) -> tuple[int, int]:
        """Deterministic order among equally scored actions."""
        dest = self.destination if self.destination is not None else -1
        return (ACTION_RANK[self.kind], dest)


class BackupResource(BaseModel):
    """A standby node that can take over a failed node's tasks."""

    model_config = ConfigDict(frozen=True)

    node: int = Field(..., ge=0)
    warm: bool = True
    restore_cost: int = Field(default=0, ge=0)

    def sort_key(self) -> tuple[int, int, int]:
        return (0 if self.warm else 1, self.restore_cost, self.node)
