"""Metrics derived from a finished event log."""

from collections.abc import Sequence

import numpy as np

from src.errors import InputError
from src.models.simulation import ConfusionCounts, EventKind, SimEvent, SimMetrics
from src.models.telemetry import TelemetryTrace
from src.simulation.eventlog import is_ordered
from src.telemetry.features import label_matrix


def confusion_counts(predicted: np.ndarray, labels: np.ndarray) -> ConfusionCounts:
    """Compare boolean (ticks, nodes) warning and label arrays window by window."""
    if predicted.shape != labels.shape:
        raise InputError(f"warning shape {predicted.shape} != label shape {labels.shape}")
    return ConfusionCounts(
        tp=int(np.sum(predicted & labels)),
        fp=int(np.sum(predicted & ~labels)),
        tn=int(np.sum(~predicted & ~labels)),
        fn=int(np.sum(~predicted & labels)),
    )


def warning_matrix(events: Sequence[SimEvent], ticks: int, nodes: int) -> np.ndarray:
    warned = np.zeros((ticks, nodes), dtype=bool)
    for event in events:
        if event.kind is EventKind.WARNING:
            warned[event.tick, event.payload["node"]] = True
    return warned


def compute_metrics(events: Sequence[SimEvent], trace: TelemetryTrace, horizon: int) -> SimMetrics:
    """Recovery times, downtime, overhead and warning accuracy of one run.

    Args:
        events: Complete event log in (tick, seq) order.
        trace: The trace the run was driven by; supplies window labels.
        horizon: H, the fault horizon used for labels.

    Returns:
        SimMetrics. A task-affecting fault with no RecoveryDone is censored:
        its recovery time runs to the end of the trace and its id is listed
        in ``censored_faults``.
    """
    if not is_ordered(events):
        raise InputError("event log is not ordered by (tick, seq)")

    started: dict[int, int] = {}
    recovery: dict[int, int] = {}
    fault_count = 0
    downtime = 0
    overhead = 0
    for event in events:
        payload = event.payload
        overhead += int(payload.get("cost", 0))
        if event.kind is EventKind.FAULT_START:
            fault_count += 1
            if payload.get("tasks"):
                started[payload["fault_id"]] = event.tick
        elif event.kind is EventKind.RECOVERY_DONE:
            fault_id = payload["fault_id"]
            if fault_id in started and fault_id not in recovery:
                recovery[fault_id] = event.tick - started[fault_id]
        elif event.kind is EventKind.METRIC_TICK and payload.get("unavailable", 0) > 0:
            downtime += 1

    censored = sorted(f for f in started if f not in recovery)
    for fault_id in censored:
        recovery[fault_id] = trace.horizon - started[fault_id]

    predicted = warning_matrix(events, trace.horizon, trace.node_count)
    confusion = confusion_counts(predicted, label_matrix(trace, horizon))

    return SimMetrics(
        recovery_times=dict(sorted(recovery.items())),
        censored_faults=censored,
        total_downtime=downtime,
        overhead_cost=overhead,
        confusion=confusion,
        fault_count=fault_count,
    )
