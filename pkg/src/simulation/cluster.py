"""Cluster state: nodes, tasks and what injected faults and actions do to them."""

import math
from dataclasses import dataclass, field

from src.models.actions import ActionKind, BackupResource
from src.models.scenario import SimulationConfig
from src.models.simulation import EventKind, NodeState, NodeStatus
from src.models.telemetry import FaultEventSpec, FaultKind
from src.simulation.eventlog import EventLog
from src.utils.logger import get_logger

logger = get_logger("simulation")

# Network slowdown never divides by less than this
MAX_SLOWDOWN_SEVERITY = 0.9


@dataclass
class Transfer:
    """A live move of a task (migration or proactive failover) in flight."""

    kind: ActionKind
    source: int
    destination: int
    done_tick: int

    @property
    def event_kind(self) -> EventKind:
        if self.kind is ActionKind.MIGRATE_TASK:
            return EventKind.MIGRATION
        return EventKind.FAILOVER


@dataclass
class TaskState:
    task_id: int
    host: int | None
    available: bool = True
    # ticks the task has run; work since the last snapshot is what a failure loses
    run_ticks: int = 0
    ckpt_run_ticks: int = 0
    ckpt_tick: int = 0
    work: int = 0
    credit: float = 0.0
    saving_until: int | None = None
    transfer: Transfer | None = None
    recovering_until: int | None = None
    paused_until: int = -1
    open_faults: list[int] = field(default_factory=list)

    @property
    def waiting(self) -> bool:
        return self.host is None

    @property
    def busy(self) -> bool:
        return (
            not self.available
            or self.saving_until is not None
            or self.transfer is not None
        )

    @property
    def lost_ticks(self) -> int:
        return self.run_ticks - self.ckpt_run_ticks


def slowed(ticks: int, severity: float) -> int:
    """Duration under a network fault: ceil(d / (1 - severity)), severity capped at 0.9."""
    if ticks <= 0:
        return 0
    factor = 1.0 - min(severity, MAX_SLOWDOWN_SEVERITY)
    return math.ceil(round(ticks / factor, 9))


class Cluster:
    """Mutable state of one simulation run."""

    def __init__(self, node_count: int, config: SimulationConfig, log: EventLog):
        self.config = config
        self.log = log
        self.nodes = [NodeState(node_id=i) for i in range(node_count)]
        self.tasks = [TaskState(task_id=t, host=t) for t in range(config.task_count)]
        for task_id in range(config.task_count):
            self.nodes[task_id].tasks.add(task_id)
            self.nodes[task_id].last_checkpoint_tick[task_id] = 0
        # fault id -> tasks still to recover
        self.pending: dict[int, set[int]] = {}
        # node -> last observed health state index
        self.states: list[int] = [0] * node_count

    # -- queries -----------------------------------------------------------

    def network_severity(self, node_id: int, tick: int) -> float:
        effect = self.nodes[node_id].effects.get(FaultKind.NETWORK_INSTABILITY)
        if effect is None or effect[1] <= tick:
            return 0.0
        return effect[0]

    def slow(self, node_id: int, ticks: int, tick: int) -> int:
        return slowed(ticks, self.network_severity(node_id, tick))

    def restore_cost(self, node_id: int, lost: int, tick: int) -> int:
        """Checkpoint restore on ``node_id``: c_restore plus recompute of ``lost`` ticks."""
        return self.slow(node_id, self.config.c_restore + lost, tick)

    def takeover_cost(self, node_id: int, tick: int) -> int:
        """Failover hand-off onto ``node_id``; a standby that is not Healthy boots cold."""
        ticks = self.config.failover_ticks
        if self.states[node_id] != 0:
            ticks += self.config.cold_start_ticks
        return self.slow(node_id, ticks, tick)

    def backups(self, tick: int) -> list[BackupResource]:
        """Idle Up nodes, best first."""
        found = [
            BackupResource(
                node=n.node_id,
                warm=self.states[n.node_id] == 0,
                restore_cost=self.takeover_cost(n.node_id, tick),
            )
            for n in self.nodes
            if n.is_up and not n.tasks
        ]
        return sorted(found, key=BackupResource.sort_key)

    def default_destination(self, exclude: int | None = None) -> int | None:
        """Up node with the fewest tasks, then the lowest id."""
        candidates = [n for n in self.nodes if n.is_up and n.node_id != exclude]
        if not candidates:
            return None
        return min(candidates, key=lambda n: (len(n.tasks), n.node_id)).node_id

    def unavailable_count(self) -> int:
        return sum(1 for t in self.tasks if not t.available)

    def replica_count(self) -> int:
        return sum(len(n.replica_of) for n in self.nodes if n.is_up)

    def replicas_of(self, task_id: int) -> list[int]:
        return [n.node_id for n in self.nodes if task_id in n.replica_of]

    # -- actions -----------------------------------------------------------

    def start_checkpoint(self, task_id: int, tick: int) -> bool:
        task = self.tasks[task_id]
        if task.busy or task.host is None or not self.nodes[task.host].is_up:
            return False
        task.ckpt_run_ticks = task.run_ticks
        task.ckpt_tick = tick
        task.saving_until = tick + self.slow(task.host, self.config.c_save, tick)
        self.nodes[task.host].last_checkpoint_tick[task_id] = tick
        self.log.emit(
            tick,
            EventKind.CHECKPOINT_START,
            task=task_id,
            node=task.host,
            cost=self.config.costs.checkpoint,
        )
        return True

    def start_transfer(self, task_id: int, kind: ActionKind, destination: int, tick: int) -> bool:
        task = self.tasks[task_id]
        if task.busy or task.host is None or task.host == destination:
            return False
        if not self.nodes[destination].is_up:
            return False
        if kind is ActionKind.MIGRATE_TASK:
            duration = self.config.c_migrate
            event, cost = EventKind.MIGRATION, self.config.costs.migration
        else:
            duration = self.config.failover_ticks
            if self.states[destination] != 0:
                duration += self.config.cold_start_ticks
            event, cost = EventKind.FAILOVER, self.config.costs.failover
        task.transfer = Transfer(
            kind=kind,
            source=task.host,
            destination=destination,
            done_tick=tick + self.slow(task.host, duration, tick),
        )
        self.log.emit(
            tick,
            event,
            task=task_id,
            source=task.host,
            destination=destination,
            phase="start",
            cost=cost,
        )
        return True

    def throttle(self, node_id: int, tick: int) -> bool:
        node = self.nodes[node_id]
        if not node.is_up:
            return False
        node.throttled_until = tick + self.config.throttle_ticks
        self.log.emit(
            tick,
            EventKind.DECISION,
            applied=str(ActionKind.THROTTLE_LOAD),
            node=node_id,
            until=node.throttled_until,
            cost=self.config.costs.throttle,
        )
        return True

    def restart(self, node_id: int, tick: int) -> bool:
        """Graceful restart: transient effects cleared, hosted tasks paused."""
        node = self.nodes[node_id]
        if not node.is_up:
            return False
        node.effects.clear()
        node.status = NodeStatus.RECOVERING
        node.recovering_until = tick + self.config.restart_ticks
        for task_id in node.tasks:
            self.tasks[task_id].paused_until = node.recovering_until
        self.log.emit(
            tick,
            EventKind.DECISION,
            applied=str(ActionKind.RESTART_NODE),
            node=node_id,
            until=node.recovering_until,
            cost=self.config.costs.restart,
        )
        return True

    def set_replicas(self, task_id: int, targets: list[int], tick: int) -> None:
        """Make the replica set of ``task_id`` exactly ``targets`` (Up nodes only)."""
        wanted = {n for n in targets if self.nodes[n].is_up and n != self.tasks[task_id].host}
        for node in self.nodes:
            if task_id in node.replica_of and node.node_id not in wanted:
                node.replica_of.discard(task_id)
        for node_id in sorted(wanted):
            node = self.nodes[node_id]
            if task_id not in node.replica_of:
                node.replica_of.add(task_id)
                self.log.emit(
                    tick,
                    EventKind.DECISION,
                    applied="ReplicaBuild",
                    task=task_id,
                    node=node_id,
                    cost=self.config.costs.replica_build,
                )

    # -- recovery ----------------------------------------------------------

    def place(self, task_id: int, destination: int, tick: int, reactive_failover: bool) -> None:
        """Start restoring a lost task on ``destination``."""
        task = self.tasks[task_id]
        node = self.nodes[destination]
        replica = task_id in node.replica_of
        if replica:
            node.replica_of.discard(task_id)
            lost = 0
            restore = self.slow(destination, self.config.failover_ticks, tick)
            task.ckpt_run_ticks = task.run_ticks
        else:
            lost = task.lost_ticks
            restore = self.restore_cost(destination, lost, tick)
        duration = max(1, restore)
        task.host = destination
        task.recovering_until = tick + duration
        node.tasks.add(task_id)
        node.last_checkpoint_tick[task_id] = task.ckpt_tick
        if reactive_failover:
            self.log.emit(
                tick,
                EventKind.FAILOVER,
                task=task_id,
                destination=destination,
                phase="reactive",
                replica=replica,
                cost=self.config.costs.failover,
            )
        self.log.emit(
            tick,
            EventKind.RECOVERY_START,
            task=task_id,
            node=destination,
            faults=list(task.open_faults),
            lost=lost,
            duration=duration,
            replica=replica,
        )

    def place_waiting(self, tick: int) -> None:
        for task in self.tasks:
            if task.waiting:
                destination = self.default_destination()
                if destination is None:
                    return
                self.place(task.task_id, destination, tick, reactive_failover=False)

    # -- time --------------------------------------------------------------

    def end_fault(self, fault: FaultEventSpec, fault_id: int, tick: int) -> None:
        node = self.nodes[fault.target_node]
        if fault.kind is FaultKind.HARDWARE_FAILURE:
            if node.status is NodeStatus.DOWN and node.down_until == tick:
                node.status = NodeStatus.UP
                node.down_until = None
            else:
                return
        else:
            effect = node.effects.get(fault.kind)
            if effect is not None and effect[1] <= tick:
                del node.effects[fault.kind]
        self.log.emit(tick, EventKind.FAULT_END, fault_id=fault_id, node=fault.target_node)

    def advance(self, tick: int) -> None:
        """Complete due operations, then accrue one tick of work."""
        for node in self.nodes:
            if node.status is NodeStatus.RECOVERING and node.recovering_until == tick:
                node.status = NodeStatus.UP
                node.recovering_until = None
        self.place_waiting(tick)

        for task in self.tasks:
            if task.saving_until is not None and task.saving_until <= tick:
                task.saving_until = None
                self.log.emit(tick, EventKind.CHECKPOINT_DONE, task=task.task_id, node=task.host)
            if task.transfer is not None and task.transfer.done_tick <= tick:
                self._finish_transfer(task, tick)
            if task.recovering_until is not None and task.recovering_until <= tick:
                self._finish_recovery(task, tick)
            self._accrue(task, tick)

    def _finish_transfer(self, task: TaskState, tick: int) -> None:
        transfer = task.transfer
        assert transfer is not None
        task.transfer = None
        kind = transfer.event_kind
        destination = self.nodes[transfer.destination]
        if not destination.is_up:
            self.log.emit(
                tick, kind, task=task.task_id, source=transfer.source,
                destination=transfer.destination, phase="aborted",
            )
            return
        source = self.nodes[transfer.source]
        source.tasks.discard(task.task_id)
        source.last_checkpoint_tick.pop(task.task_id, None)
        destination.tasks.add(task.task_id)
        destination.replica_of.discard(task.task_id)
        destination.last_checkpoint_tick[task.task_id] = task.ckpt_tick
        task.host = transfer.destination
        self.log.emit(
            tick, kind, task=task.task_id, source=transfer.source,
            destination=transfer.destination, phase="done",
        )

    def _finish_recovery(self, task: TaskState, tick: int) -> None:
        task.recovering_until = None
        task.available = True
        for fault_id in task.open_faults:
            waiting_on = self.pending.get(fault_id)
            if waiting_on is None:
                continue
            waiting_on.discard(task.task_id)
            if not waiting_on:
                del self.pending[fault_id]
                self.log.emit(tick, EventKind.RECOVERY_DONE, fault_id=fault_id, node=task.host)
        task.open_faults.clear()

    def _accrue(self, task: TaskState, tick: int) -> None:
        if not task.available or task.host is None or task.paused_until > tick:
            return
        node = self.nodes[task.host]
        if node.status is NodeStatus.DOWN:
            return
        rate = 1.0
        if task.saving_until is not None:
            rate *= 0.5
        overload = node.effects.get(FaultKind.RESOURCE_OVERLOAD)
        if overload is not None and overload[1] > tick:
            rate *= 1.0 - 0.5 * overload[0]
        if node.throttled_until > tick:
            rate *= 0.5
        task.run_ticks += 1
        task.credit += rate
        gained = int(task.credit)
        task.work += gained
        task.credit -= gained


def apply_fault(cluster: Cluster, fault: FaultEventSpec, fault_id: int) -> list[int]:
    """Inject one fault at its own tick.

    HardwareFailure takes the node Down until repaired, rolls hosted tasks back
    to their last snapshot and drops replicas and transfers touching it.
    NetworkInstability slows saves, transfers and restores on the node;
    ResourceOverload slows task progress. Faults against a Down node are
    logged as no-ops.

    Returns:
        Ids of tasks that lost their host and need placement.
    """
    tick = fault.tick
    node = cluster.nodes[fault.target_node]
    common = {
        "fault_id": fault_id,
        "node": fault.target_node,
        "fault_kind": str(fault.kind),
        "severity": fault.severity,
        "duration": fault.duration,
    }
    if node.status is NodeStatus.DOWN:
        cluster.log.emit(tick, EventKind.FAULT_START, tasks=[], noop=True, **common)
        logger.debug("fault_on_down_node", **common)
        return []

    if fault.kind is not FaultKind.HARDWARE_FAILURE:
        severity = fault.severity
        if fault.kind is FaultKind.RESOURCE_OVERLOAD and node.throttled_until > tick:
            severity *= 0.5
        node.effects[fault.kind] = (severity, fault.end_tick)
        if fault.kind is FaultKind.NETWORK_INSTABILITY:
            _stretch_in_flight(cluster, fault.target_node, severity, tick)
        cluster.log.emit(tick, EventKind.FAULT_START, tasks=[], noop=False, **common)
        return []

    lost_tasks = sorted(node.tasks)
    node.status = NodeStatus.DOWN
    node.down_until = fault.end_tick
    node.recovering_until = None
    node.replica_of.clear()
    node.effects.clear()
    node.tasks.clear()
    node.last_checkpoint_tick.clear()

    for task in cluster.tasks:
        transfer = task.transfer
        if transfer is not None and transfer.destination == fault.target_node:
            task.transfer = None
            kind = transfer.event_kind
            cluster.log.emit(
                tick, kind, task=task.task_id, source=transfer.source,
                destination=transfer.destination, phase="aborted",
            )

    for task_id in lost_tasks:
        task = cluster.tasks[task_id]
        if task.transfer is not None:
            transfer = task.transfer
            task.transfer = None
            kind = transfer.event_kind
            cluster.log.emit(
                tick, kind, task=task_id, source=transfer.source,
                destination=transfer.destination, phase="aborted",
            )
        task.host = None
        task.available = False
        task.saving_until = None
        task.recovering_until = None
        task.paused_until = -1
        task.credit = 0.0
        task.open_faults.append(fault_id)

    if lost_tasks:
        cluster.pending[fault_id] = set(lost_tasks)
    cluster.log.emit(tick, EventKind.FAULT_START, tasks=lost_tasks, noop=False, **common)
    return lost_tasks


def _stretch_in_flight(cluster: Cluster, node_id: int, severity: float, tick: int) -> None:
    for task in cluster.tasks:
        if task.host == node_id and task.saving_until is not None:
            task.saving_until = tick + slowed(task.saving_until - tick, severity)
        if task.host == node_id and task.recovering_until is not None:
            task.recovering_until = tick + max(1, slowed(task.recovering_until - tick, severity))
        if task.transfer is not None and task.transfer.source == node_id:
            remaining = task.transfer.done_tick - tick
            task.transfer.done_tick = tick + slowed(remaining, severity)
