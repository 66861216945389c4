"""The adaptive controller: prediction, interval scheduling, anomaly flags and
cost-aware mitigation combined."""

from dataclasses import dataclass
from typing import Any

from src.anomaly.markov import is_anomalous, transition_prob
from src.mitigation.scoring import candidate_actions, score_breakdown, select_action
from src.mitigation.transitions import TransitionModel, should_failover
from src.models.actions import Action, ActionKind, DiscreteState
from src.models.scenario import ScenarioConfig
from src.models.telemetry import SystemLoad
from src.predictor.model import FaultProbability, PredictorWeights, predict_batch
from src.scheduler.checkpoint import checkpoint_rate, rate_to_interval
from src.strategies.base import Observation, Strategy, StrategyDecision
from src.utils.logger import get_logger

logger = get_logger("strategies")


@dataclass(frozen=True)
class _Pending:
    """An applied action whose outcome is read on the next tick from ``node``."""

    state: int
    kind: ActionKind
    node: int


class AdaptiveController(Strategy):
    """Per tick: P(fault) per node, λ_t and the checkpoint interval per task,
    Markov anomaly flags, and for warned or anomalous hosts the cheapest
    action by L = λ1·cost + λ2·impact, with failover gated on the learned
    probability of reaching Healthy.
    """

    name = "Adaptive"
    uses_predictor = True
    uses_backups = True

    def __init__(self, scenario: ScenarioConfig, weights: PredictorWeights):
        self.weights = weights
        self.threshold = scenario.predictor.threshold
        self.scheduler = scenario.scheduler
        self.anomaly = scenario.anomaly
        self.mitigator = scenario.mitigator
        self.model = TransitionModel(
            state_count=scenario.anomaly.state_count,
            prior=scenario.mitigator.prior,
        )
        self._pending: list[_Pending] = []

    def decide(self, obs: Observation) -> StrategyDecision:
        self._learn(obs)
        decision = StrategyDecision()
        probabilities = predict_batch(self.weights, obs.values)

        for node in range(obs.node_count):
            if not obs.is_up(node):
                continue
            p = float(probabilities[node])
            if p > self.threshold:
                decision.warnings[node] = p
            previous = obs.previous_state(node)
            if previous is not None:
                current = obs.state(node)
                if is_anomalous(previous, current, self.anomaly):
                    decision.anomalies[node] = (
                        previous.index,
                        current.index,
                        transition_prob(previous, current, self.anomaly),
                    )

        triggered = set(decision.warnings) | set(decision.anomalies)
        reserved: set[int] = set()
        for task in obs.tasks:
            if task.host is None or not task.available:
                continue
            node = task.host
            p = FaultProbability(value=float(probabilities[node]))
            # the interval follows cluster load; action costs follow the host's
            rate = checkpoint_rate(p, obs.system_load, self.scheduler)
            interval = rate_to_interval(rate, self.scheduler)
            load = SystemLoad(value=float(obs.loads[node]))
            inputs = {
                "task": task.task_id,
                "node": node,
                "p": p.value,
                "system_load": obs.system_load.value,
                "load": load.value,
                "rate": rate.value,
                "interval": interval,
            }

            if node in triggered and not task.busy:
                action = self._mitigate(obs, node, task.task_id, load, triggered, reserved, inputs)
                decision.records.append(inputs)
                if action.kind is not ActionKind.NOOP:
                    decision.actions.append(action)
                    outcome_node = action.destination if action.destination is not None else node
                    self._pending.append(
                        _Pending(obs.state(node).index, action.kind, outcome_node)
                    )
                    if action.destination is not None:
                        reserved.add(action.destination)
                    continue

            since = obs.tick - task.last_checkpoint_tick
            if since >= interval and not task.busy:
                decision.actions.append(
                    Action(kind=ActionKind.CHECKPOINT, target=node, task=task.task_id)
                )
                decision.records.append({**inputs, "since": since, "applied": "Checkpoint"})
        return decision

    def _mitigate(
        self,
        obs: Observation,
        node: int,
        task: int,
        load: SystemLoad,
        triggered: set[int],
        reserved: set[int],
        record: dict[str, Any],
    ) -> Action:
        """Pick the action for one task on a warned or anomalous host."""
        state = obs.state(node)
        excluded = triggered | reserved | {node}
        destination = obs.least_loaded(exclude=excluded)
        backups = [b for b in obs.backups if b.node not in excluded]
        candidates = candidate_actions(
            node,
            task,
            [destination] if destination is not None else [],
            backups,
        )
        chosen = select_action(state, candidates, load, self.mitigator)
        applied = chosen
        if chosen.kind is ActionKind.FAILOVER_TO_BACKUP:
            backup = should_failover(self.model, state, backups, self.mitigator)
            if backup is not None:
                applied = Action(
                    kind=ActionKind.FAILOVER_TO_BACKUP,
                    target=node,
                    destination=backup.node,
                    task=task,
                )
            else:
                fallback = [c for c in candidates if c.kind is not ActionKind.FAILOVER_TO_BACKUP]
                applied = select_action(state, fallback, load, self.mitigator)

        record.update(
            state=state.index,
            chosen=str(chosen.kind),
            chosen_destination=chosen.destination,
            applied=str(applied.kind),
            destination=applied.destination,
            scores={
                _label(c): score_breakdown(state, c, load, self.mitigator).as_dict()
                for c in candidates
            },
        )
        return applied

    def on_failure(self, obs: Observation, node: int, tasks: list[int]) -> list[Action]:
        """Fail the lost tasks over to the best-ranked standbys.

        The host is already gone, so the success gate does not apply; outcomes
        are recorded against the host's last state before the failure.
        """
        previous = obs.previous_state(node)
        state = previous if previous is not None else obs.state(node)
        pool = [b for b in obs.backups if b.node != node]
        actions = []
        for task, backup in zip(tasks, pool):
            self._pending.append(_Pending(state.index, ActionKind.FAILOVER_TO_BACKUP, backup.node))
            actions.append(
                Action(
                    kind=ActionKind.FAILOVER_TO_BACKUP,
                    target=node,
                    destination=backup.node,
                    task=task,
                )
            )
        if actions:
            logger.debug(
                "adaptive_reactive_failover",
                tick=obs.tick,
                node=node,
                state=state.index,
                destinations=[a.destination for a in actions],
            )
        return actions

    def _learn(self, obs: Observation) -> None:
        """Record the state of each pending action's landing node; Down reads as the worst."""
        worst = DiscreteState(self.anomaly.state_count - 1)
        for pending in self._pending:
            outcome = obs.state(pending.node) if obs.is_up(pending.node) else worst
            self.model.observe(DiscreteState(pending.state), pending.kind, outcome)
        self._pending = []


def _label(action: Action) -> str:
    if action.destination is None:
        return str(action.kind)
    return f"{action.kind}:{action.destination}"
