"""Tick loop: observe, decide, apply decisions, inject faults, progress.

A run is a pure function of (scenario, strategy, seed): the trace is generated
from the seed, strategies are deterministic and nothing is shared between runs.
"""

from collections import defaultdict

import numpy as np

from src.anomaly.markov import discretize_matrix
from src.errors import TraceMismatchError, UnknownNodeError
from src.models.actions import Action, ActionKind
from src.models.scenario import ScenarioConfig
from src.models.simulation import EventKind, NodeStatus, SimReport
from src.models.telemetry import FaultEventSpec, FaultKind, SystemLoad, TelemetryTrace
from src.predictor.model import PredictorWeights
from src.predictor.trainer import train_for_scenario
from src.simulation.cluster import Cluster, apply_fault
from src.simulation.eventlog import EventLog
from src.simulation.metrics import compute_metrics
from src.strategies.base import Observation, Strategy, StrategyDecision, TaskView
from src.strategies.registry import StrategyKind, build_strategy, resolve_kind
from src.telemetry.features import node_loads
from src.telemetry.generator import generate_trace
from src.utils.logger import get_logger

logger = get_logger("simulation")


def check_trace(scenario: ScenarioConfig, trace: TelemetryTrace) -> None:
    """Reject a trace whose shape or indicators disagree with the scenario."""
    expected = (scenario.horizon, scenario.node_count, scenario.telemetry.indicator_count)
    if trace.values.shape != expected:
        raise TraceMismatchError(f"trace shape {trace.values.shape} != scenario {expected}")
    if trace.indicators != tuple(scenario.telemetry.indicators):
        raise TraceMismatchError("trace indicators differ from the scenario's")
    for fault in trace.fault_schedule:
        if fault.target_node >= scenario.node_count or fault.tick >= scenario.horizon:
            raise TraceMismatchError(
                f"fault at tick {fault.tick} on node {fault.target_node} outside the scenario"
            )


class Simulator:
    """Drives one strategy over one trace."""

    def __init__(self, scenario: ScenarioConfig, strategy: Strategy, trace: TelemetryTrace):
        check_trace(scenario, trace)
        self.scenario = scenario
        self.strategy = strategy
        self.trace = trace
        self.log = EventLog()
        self.cluster = Cluster(scenario.node_count, scenario.simulation, self.log)

        ticks, nodes, n = trace.values.shape
        self.states = discretize_matrix(trace.values.reshape(-1, n), scenario.anomaly).reshape(
            ticks, nodes
        )
        self.loads = node_loads(trace.values, scenario.telemetry.load_weights)

        self._starts: dict[int, list[tuple[int, FaultEventSpec]]] = defaultdict(list)
        for fault_id, fault in enumerate(trace.fault_schedule):
            self._starts[fault.tick].append((fault_id, fault))
        self._ends: dict[int, list[tuple[int, FaultEventSpec]]] = defaultdict(list)

    def run(self) -> EventLog:
        costs = self.scenario.simulation.costs
        prediction_cost = costs.prediction if self.strategy.uses_predictor else 0
        for tick in range(self.trace.horizon):
            self.cluster.states = [int(s) for s in self.states[tick]]
            obs = self.observe(tick)
            decision = self.strategy.decide(obs)
            self._record(tick, decision)
            self._apply(tick, decision)
            self._inject(tick, obs)
            self.cluster.advance(tick)
            replicas = self.cluster.replica_count()
            self.log.emit(
                tick,
                EventKind.METRIC_TICK,
                unavailable=self.cluster.unavailable_count(),
                work=sum(t.work for t in self.cluster.tasks),
                replicas=replicas,
                cost=replicas * costs.replica_upkeep + prediction_cost,
            )
        return self.log

    def observe(self, tick: int) -> Observation:
        cluster = self.cluster
        statuses = tuple(n.status for n in cluster.nodes)
        loads = self.loads[tick]
        up = [i for i, s in enumerate(statuses) if s is NodeStatus.UP]
        system_load = float(np.mean(loads[up])) if up else 0.0
        tasks = tuple(
            TaskView(
                task_id=t.task_id,
                host=t.host,
                available=t.available,
                busy=t.busy,
                last_checkpoint_tick=t.ckpt_tick,
                replicas=tuple(cluster.replicas_of(t.task_id)),
            )
            for t in cluster.tasks
        )
        return Observation(
            tick=tick,
            values=self.trace.values[tick],
            states=self.states[tick],
            loads=loads,
            system_load=SystemLoad(value=min(max(system_load, 0.0), 1.0)),
            statuses=statuses,
            tasks=tasks,
            backups=tuple(cluster.backups(tick)) if self.strategy.uses_backups else (),
            previous_states=self.states[tick - 1] if tick > 0 else None,
        )

    def _record(self, tick: int, decision: StrategyDecision) -> None:
        for node, signal in sorted(decision.warnings.items()):
            self.log.emit(tick, EventKind.WARNING, node=node, signal=signal)
        for node, (s_from, s_to, prob) in sorted(decision.anomalies.items()):
            self.log.emit(
                tick, EventKind.ANOMALY_FLAG, node=node, from_state=s_from, to_state=s_to, prob=prob
            )
        for record in decision.records:
            self.log.emit(tick, EventKind.DECISION, **record)

    def _apply(self, tick: int, decision: StrategyDecision) -> None:
        cluster = self.cluster
        for task_id, nodes in sorted(decision.replicas.items()):
            cluster.set_replicas(task_id, nodes, tick)
        for action in decision.actions:
            self._apply_action(tick, action)

    def _apply_action(self, tick: int, action: Action) -> None:
        cluster = self.cluster
        if action.target >= len(cluster.nodes):
            raise UnknownNodeError(f"action targets unknown node {action.target}")
        if action.destination is not None and action.destination >= len(cluster.nodes):
            raise UnknownNodeError(f"action targets unknown node {action.destination}")

        if action.task is not None:
            tasks = [action.task] if cluster.tasks[action.task].host == action.target else []
        else:
            tasks = sorted(cluster.nodes[action.target].tasks)

        kind = action.kind
        if kind is ActionKind.CHECKPOINT:
            for task_id in tasks:
                cluster.start_checkpoint(task_id, tick)
        elif kind in (ActionKind.MIGRATE_TASK, ActionKind.FAILOVER_TO_BACKUP):
            assert action.destination is not None
            for task_id in tasks:
                cluster.start_transfer(task_id, kind, action.destination, tick)
        elif kind is ActionKind.THROTTLE_LOAD:
            cluster.throttle(action.target, tick)
        elif kind is ActionKind.RESTART_NODE:
            cluster.restart(action.target, tick)

    def _inject(self, tick: int, obs: Observation) -> None:
        cluster = self.cluster
        for fault_id, fault in self._ends.pop(tick, []):
            cluster.end_fault(fault, fault_id, tick)

        for fault_id, fault in self._starts.get(tick, []):
            was_down = cluster.nodes[fault.target_node].status is NodeStatus.DOWN
            lost = apply_fault(cluster, fault, fault_id)
            if was_down:
                continue
            if fault.end_tick < self.trace.horizon:
                self._ends[fault.end_tick].append((fault_id, fault))
            if fault.kind is FaultKind.HARDWARE_FAILURE and lost:
                self._place(tick, obs, fault.target_node, lost)

    def _place(self, tick: int, obs: Observation, node: int, lost: list[int]) -> None:
        cluster = self.cluster
        chosen: dict[int, int] = {}
        for action in self.strategy.on_failure(obs, node, lost):
            if (
                action.kind is ActionKind.FAILOVER_TO_BACKUP
                and action.task in lost
                and action.destination is not None
                and cluster.nodes[action.destination].is_up
            ):
                chosen.setdefault(action.task, action.destination)

        for task_id in lost:
            if task_id in chosen:
                cluster.place(task_id, chosen[task_id], tick, reactive_failover=True)
                continue
            destination = cluster.default_destination()
            if destination is None:
                logger.debug("task_waiting", tick=tick, task=task_id)
                continue
            cluster.place(task_id, destination, tick, reactive_failover=False)


def run_simulation(
    scenario: ScenarioConfig,
    strategy: str | StrategyKind,
    seed: int,
    weights: PredictorWeights | None = None,
    trace: TelemetryTrace | None = None,
) -> SimReport:
    """Simulate one strategy on the trace of ``seed``.

    Args:
        scenario: Validated scenario.
        strategy: Strategy name (CP, RP, SM, AD, Adaptive) or a StrategyKind.
        seed: Evaluation seed; the trace is generated from it unless given.
        weights: Trained predictor for AD and Adaptive; trained on the
            scenario's training seeds when omitted.
        trace: Optional pre-generated trace for ``seed``.

    Returns:
        SimReport with the full event log and derived metrics.
    """
    kind = resolve_kind(strategy, scenario)
    if trace is None:
        trace = generate_trace(scenario, seed)
    if kind.needs_predictor and weights is None:
        weights = train_for_scenario(scenario).weights

    simulator = Simulator(scenario, build_strategy(kind, scenario, weights), trace)
    events = simulator.run().events
    metrics = compute_metrics(events, trace, scenario.fault_horizon)
    logger.info(
        "run_completed",
        strategy=kind.name,
        seed=seed,
        faults=metrics.fault_count,
        downtime=metrics.total_downtime,
        overhead=metrics.overhead_cost,
        accuracy=round(metrics.confusion.accuracy, 6),
    )
    return SimReport(strategy=kind.name, seed=seed, events=events, metrics=metrics)
