"""Ordinal health states and the exponential-decay Markov transition kernel.

P(s' | s) = exp(-λ·|s' - s|) / Z(s), with Z(s) summed over the S candidate
next states, so every row is a proper distribution.
"""

import math
from functools import lru_cache

import numpy as np

from src.errors import DimensionError, InputError
from src.models.actions import DiscreteState
from src.models.scenario import AnomalyConfig
from src.models.telemetry import MetricVector


def health_score(values: np.ndarray, cfg: AnomalyConfig) -> np.ndarray | float:
    """Convex combination of indicators; works on a vector or a (rows, n) matrix."""
    weights = np.asarray(cfg.health_weights, dtype=np.float64)
    if values.shape[-1] != weights.shape[0]:
        raise DimensionError(
            f"expected {weights.shape[0]} indicators, got {values.shape[-1]}"
        )
    return np.clip(values @ weights, 0.0, 1.0)


def discretize_state(x: MetricVector, cfg: AnomalyConfig) -> DiscreteState:
    """index = min(floor(h·S), S-1) for health score h."""
    h = float(health_score(x.as_array(), cfg))
    return DiscreteState(min(math.floor(h * cfg.state_count), cfg.state_count - 1))


def discretize_matrix(values: np.ndarray, cfg: AnomalyConfig) -> np.ndarray:
    """State index for every row of a (rows, n) matrix."""
    h = health_score(values, cfg)
    return np.minimum(np.floor(h * cfg.state_count), cfg.state_count - 1).astype(np.int64)


@lru_cache(maxsize=64)
def _kernel(state_count: int, decay: float) -> np.ndarray:
    idx = np.arange(state_count)
    weights = np.exp(-decay * np.abs(idx[np.newaxis, :] - idx[:, np.newaxis]))
    kernel = weights / weights.sum(axis=1, keepdims=True)
    kernel.setflags(write=False)
    return kernel


def transition_matrix(cfg: AnomalyConfig) -> np.ndarray:
    """Row-stochastic (S, S) matrix of the kernel."""
    return _kernel(cfg.state_count, cfg.decay)


def _check_state(state: DiscreteState, cfg: AnomalyConfig) -> None:
    if not 0 <= state.index < cfg.state_count:
        raise InputError(f"state {state.index} outside [0, {cfg.state_count - 1}]")


def transition_prob(s_from: DiscreteState, s_to: DiscreteState, cfg: AnomalyConfig) -> float:
    _check_state(s_from, cfg)
    _check_state(s_to, cfg)
    return float(transition_matrix(cfg)[s_from.index, s_to.index])


def is_anomalous(s_from: DiscreteState, s_to: DiscreteState, cfg: AnomalyConfig) -> bool:
    """True when the observed transition is less likely than ε."""
    return transition_prob(s_from, s_to, cfg) < cfg.anomaly_floor
