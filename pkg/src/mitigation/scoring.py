"""Action scoring: L = λ1·ResourceCost(s, a) + λ2·FaultImpact(s, a)."""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from src.errors import ConfigurationError, InputError
from src.models.actions import Action, ActionKind, BackupResource, DiscreteState
from src.models.scenario import MitigatorConfig
from src.models.telemetry import SystemLoad


@dataclass(frozen=True)
class ScoreBreakdown:
    resource_cost: float
    fault_impact: float
    score: float

    def as_dict(self) -> dict[str, float]:
        return {
            "resource_cost": self.resource_cost,
            "fault_impact": self.fault_impact,
            "score": self.score,
        }


def resource_cost(a: Action, load: SystemLoad, cfg: MitigatorConfig) -> float:
    """Base cost of the action kind scaled by (1 + load)."""
    try:
        base = cfg.action_cost_table[a.kind]
    except KeyError:
        raise ConfigurationError(f"action_cost_table has no entry for {a.kind.value}") from None
    return base * (1.0 + load.value)


def fault_impact(s: DiscreteState, a: Action, cfg: MitigatorConfig) -> float:
    """Expected residual downtime from the impact table."""
    try:
        return cfg.impact_table[s.index][a.kind]
    except KeyError:
        raise ConfigurationError(
            f"impact_table has no entry for ({s.name}, {a.kind.value})"
        ) from None


def score_breakdown(
    s: DiscreteState,
    a: Action,
    load: SystemLoad,
    cfg: MitigatorConfig,
) -> ScoreBreakdown:
    cost = resource_cost(a, load, cfg)
    impact = fault_impact(s, a, cfg)
    return ScoreBreakdown(cost, impact, cfg.lambda1 * cost + cfg.lambda2 * impact)


def mitigation_score(s: DiscreteState, a: Action, load: SystemLoad, cfg: MitigatorConfig) -> float:
    return score_breakdown(s, a, load, cfg).score


def select_action(
    s: DiscreteState,
    candidates: Sequence[Action],
    load: SystemLoad,
    cfg: MitigatorConfig,
) -> Action:
    """Candidate with the lowest score.

    Ties go to the earlier kind in (NoOp, Checkpoint, ThrottleLoad,
    MigrateTask, RestartNode, FailoverToBackup), then the lowest destination.
    """
    if not candidates:
        raise InputError("select_action needs at least one candidate")
    return min(candidates, key=lambda a: (mitigation_score(s, a, load, cfg), a.tie_key()))


def candidate_actions(
    node: int,
    task: int | None,
    destinations: Iterable[int],
    backups: Iterable[BackupResource],
) -> list[Action]:
    """Full candidate set for one task on ``node``."""
    actions = [
        Action(kind=ActionKind.NOOP, target=node, task=task),
        Action(kind=ActionKind.CHECKPOINT, target=node, task=task),
        Action(kind=ActionKind.THROTTLE_LOAD, target=node, task=task),
        Action(kind=ActionKind.RESTART_NODE, target=node, task=task),
    ]
    actions.extend(
        Action(kind=ActionKind.MIGRATE_TASK, target=node, destination=dest, task=task)
        for dest in sorted(set(destinations))
        if dest != node
    )
    actions.extend(
        Action(kind=ActionKind.FAILOVER_TO_BACKUP, target=node, destination=b.node, task=task)
        for b in sorted(backups, key=BackupResource.sort_key)
        if b.node != node
    )
    return actions
