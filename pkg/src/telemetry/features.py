"""Scalar load and labeled windows derived from telemetry."""

from collections.abc import Sequence

import numpy as np

from src.errors import ConfigurationError, DimensionError, InputError, UnknownNodeError
from src.models.telemetry import LabeledWindow, MetricVector, SystemLoad, TelemetryTrace


def _check_weights(weights: np.ndarray, dimension: int) -> None:
    if weights.shape != (dimension,):
        raise DimensionError(f"expected {dimension} load weights, got {weights.shape[0]}")
    if np.any(weights < 0.0) or abs(float(weights.sum()) - 1.0) > 1e-9:
        raise ConfigurationError("load weights must be nonnegative and sum to 1")


def system_load(x: MetricVector, load_weights: Sequence[float]) -> SystemLoad:
    """Convex combination of indicators: I_t = Σ w_i · x_i."""
    weights = np.asarray(load_weights, dtype=np.float64)
    _check_weights(weights, x.dimension)
    value = float(np.dot(weights, x.as_array()))
    return SystemLoad(value=min(max(value, 0.0), 1.0))


def node_loads(matrix: np.ndarray, load_weights: Sequence[float]) -> np.ndarray:
    """Per-row load of a (nodes, indicators) matrix."""
    weights = np.asarray(load_weights, dtype=np.float64)
    _check_weights(weights, matrix.shape[-1])
    return np.clip(matrix @ weights, 0.0, 1.0)


def label_matrix(trace: TelemetryTrace, horizon: int) -> np.ndarray:
    """Boolean (ticks, nodes) array: a fault hits the node within (t, t+H]."""
    if horizon < 1:
        raise InputError("fault horizon H must be at least 1")
    labels = np.zeros((trace.horizon, trace.node_count), dtype=bool)
    for fault in trace.fault_schedule:
        start = max(0, fault.tick - horizon)
        labels[start:fault.tick, fault.target_node] = True
    return labels


def label_windows(trace: TelemetryTrace, node: int, horizon: int) -> list[LabeledWindow]:
    """Label every tick of one node's series.

    Args:
        trace: Telemetry trace with its fault schedule.
        node: Node id.
        horizon: H, ticks after an observation within which a fault counts.

    Returns:
        One LabeledWindow per tick, in tick order.
    """
    if not 0 <= node < trace.node_count:
        raise UnknownNodeError(f"node {node} not in trace (nodes 0..{trace.node_count - 1})")
    labels = label_matrix(trace, horizon)[:, node]
    return [
        LabeledWindow(node=node, features=trace.vector(node, t), label=bool(labels[t]))
        for t in range(trace.horizon)
    ]


def windows_to_arrays(windows: Sequence[LabeledWindow]) -> tuple[np.ndarray, np.ndarray]:
    """Stack windows into a feature matrix and a 0/1 label vector."""
    if not windows:
        raise InputError("no labeled windows")
    dimension = windows[0].features.dimension
    if any(w.features.dimension != dimension for w in windows):
        raise DimensionError("labeled windows disagree on indicator count")
    features = np.array([w.features.values for w in windows], dtype=np.float64)
    labels = np.array([1.0 if w.label else 0.0 for w in windows], dtype=np.float64)
    return features, labels
