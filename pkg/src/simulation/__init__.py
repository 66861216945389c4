"""Deterministic cluster simulation package."""

from src.simulation.cluster import Cluster, TaskState, apply_fault, slowed
from src.simulation.engine import Simulator, check_trace, run_simulation
from src.simulation.eventlog import EventLog, export_events, import_events, is_ordered
from src.simulation.metrics import compute_metrics, confusion_counts

__all__ = [
    "Cluster",
    "TaskState",
    "apply_fault",
    "slowed",
    "Simulator",
    "run_simulation",
    "check_trace",
    "EventLog",
    "export_events",
    "import_events",
    "is_ordered",
    "compute_metrics",
    "confusion_counts",
]
