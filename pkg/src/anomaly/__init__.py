"""Markov anomaly detection package."""

from src.anomaly.markov import (
    discretize_matrix,
    discretize_state,
    health_score,
    is_anomalous,
    transition_matrix,
    transition_prob,
)

__all__ = [
    "discretize_state",
    "discretize_matrix",
    "health_score",
    "transition_prob",
    "transition_matrix",
    "is_anomalous",
]
