"""Baseline controllers: periodic checkpointing, replication, state migration and
predictor-triggered checkpointing."""

from collections.abc import Iterable

from src.models.actions import Action, ActionKind
from src.predictor.model import PredictorWeights, predict_batch
from src.strategies.base import Observation, Strategy, StrategyDecision, TaskView


def periodic_checkpoints(tick: int, interval: int, tasks: Iterable[TaskView]) -> list[Action]:
    """One Checkpoint per placed task when tick mod τ = 0, else nothing."""
    if tick % interval != 0:
        return []
    return [
        Action(kind=ActionKind.CHECKPOINT, target=t.host, task=t.task_id)
        for t in tasks
        if t.host is not None
    ]


class PeriodicCheckpoint(Strategy):
    """CP: checkpoint every task every τ ticks."""

    name = "CP"

    def __init__(self, interval: int):
        self.interval = interval

    def decide(self, obs: Observation) -> StrategyDecision:
        return StrategyDecision(actions=periodic_checkpoints(obs.tick, self.interval, obs.tasks))


class Replication(Strategy):
    """RP: keep k replicas of every task and fail over to one when the primary dies."""

    name = "RP"

    def __init__(self, replicas: int):
        self.replicas = replicas

    def decide(self, obs: Observation) -> StrategyDecision:
        hosted: dict[int, int] = {}
        for task in obs.tasks:
            for node in task.replicas:
                hosted[node] = hosted.get(node, 0) + 1
        counts = obs.task_counts()

        directives: dict[int, list[int]] = {}
        for task in obs.tasks:
            if task.host is None:
                continue
            keep = [n for n in task.replicas if obs.is_up(n) and n != task.host][: self.replicas]
            spare = sorted(
                (
                    n
                    for n in range(obs.node_count)
                    if obs.is_up(n) and n != task.host and n not in keep
                ),
                key=lambda n: (hosted.get(n, 0), counts[n], n),
            )
            while len(keep) < self.replicas and spare:
                node = spare.pop(0)
                keep.append(node)
                hosted[node] = hosted.get(node, 0) + 1
            if sorted(keep) != sorted(task.replicas):
                directives[task.task_id] = sorted(keep)
        return StrategyDecision(replicas=directives)

    def on_failure(self, obs: Observation, node: int, tasks: list[int]) -> list[Action]:
        actions = []
        for task in obs.tasks:
            if task.task_id not in tasks:
                continue
            alive = [n for n in task.replicas if n != node and obs.is_up(n)]
            if alive:
                actions.append(
                    Action(
                        kind=ActionKind.FAILOVER_TO_BACKUP,
                        target=node,
                        destination=alive[0],
                        task=task.task_id,
                    )
                )
        return actions


class StateMigration(Strategy):
    """SM: move tasks off any node whose health state reaches the threshold.

    Tasks also take CP's checkpoint every τ ticks; a task being moved skips it.
    """

    name = "SM"

    def __init__(self, threshold: int, interval: int):
        self.threshold = threshold
        self.interval = interval

    def decide(self, obs: Observation) -> StrategyDecision:
        decision = StrategyDecision()
        stressed = {
            n for n in range(obs.node_count)
            if obs.is_up(n) and int(obs.states[n]) >= self.threshold
        }
        for node in sorted(stressed):
            decision.warnings[node] = float(obs.states[node])

        reserved: set[int] = set()
        for task in obs.tasks:
            if task.host not in stressed or task.busy:
                continue
            destination = obs.least_loaded(exclude=stressed | reserved | {task.host})
            if destination is None:
                continue
            reserved.add(destination)
            decision.actions.append(
                Action(
                    kind=ActionKind.MIGRATE_TASK,
                    target=task.host,
                    destination=destination,
                    task=task.task_id,
                )
            )
        moving = {a.task for a in decision.actions}
        decision.actions.extend(
            a for a in periodic_checkpoints(obs.tick, self.interval, obs.tasks)
            if a.task not in moving
        )
        return decision


class PredictiveCheckpoint(Strategy):
    """AD: periodic checkpoints plus an immediate one on every predictor warning.

    Uses the same trained predictor as the adaptive controller but neither
    adapts the interval nor scores alternative actions.
    """

    name = "AD"
    uses_predictor = True

    def __init__(self, weights: PredictorWeights, threshold: float, interval: int):
        self.weights = weights
        self.threshold = threshold
        self.interval = interval

    def decide(self, obs: Observation) -> StrategyDecision:
        decision = StrategyDecision()
        probabilities = predict_batch(self.weights, obs.values)
        for node in range(obs.node_count):
            p = float(probabilities[node])
            if obs.is_up(node) and p > self.threshold:
                decision.warnings[node] = p

        decision.actions = periodic_checkpoints(obs.tick, self.interval, obs.tasks)
        planned = {a.task for a in decision.actions}
        for task in obs.tasks:
            if task.host in decision.warnings and task.task_id not in planned and not task.busy:
                decision.actions.append(
                    Action(kind=ActionKind.CHECKPOINT, target=task.host, task=task.task_id)
                )
        return decision
