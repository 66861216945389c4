"""Action-conditioned transition estimates and the standby failover rule."""

from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass, field

from src.models.actions import HEALTHY, Action, ActionKind, BackupResource, DiscreteState
from src.models.scenario import MitigatorConfig


@dataclass
class TransitionModel:
    """Laplace-smoothed counts of (state, action kind, next state) outcomes."""

    state_count: int
    prior: float = 1.0
    counts: dict[tuple[int, ActionKind, int], int] = field(
        default_factory=lambda: defaultdict(int)
    )

    def observe(self, s: DiscreteState, kind: ActionKind, s_next: DiscreteState) -> None:
        self.counts[(s.index, kind, s_next.index)] += 1

    def row_total(self, s: DiscreteState, kind: ActionKind) -> int:
        return sum(
            self.counts.get((s.index, kind, j), 0) for j in range(self.state_count)
        )


def _kind(a: Action | ActionKind) -> ActionKind:
    return a if isinstance(a, ActionKind) else a.kind


def estimate_transition(
    model: TransitionModel,
    s: DiscreteState,
    a: Action | ActionKind,
    s_next: DiscreteState,
) -> float:
    """(count(s,a,s') + prior) / (Σ count(s,a,·) + S·prior)."""
    kind = _kind(a)
    count = model.counts.get((s.index, kind, s_next.index), 0)
    total = model.row_total(s, kind)
    return (count + model.prior) / (total + model.state_count * model.prior)


def should_failover(
    model: TransitionModel,
    s: DiscreteState,
    backups: Sequence[BackupResource],
    cfg: MitigatorConfig,
) -> BackupResource | None:
    """Pick a standby when the estimated chance of reaching Healthy exceeds η.

    Backups are tried warm before cold, then by restore cost, then node id.
    """
    for backup in sorted(backups, key=BackupResource.sort_key):
        if estimate_transition(model, s, ActionKind.FAILOVER_TO_BACKUP, HEALTHY) > cfg.eta:
            return backup
    return None
