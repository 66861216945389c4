"""Fault mitigation package."""

from src.mitigation.scoring import (
    ScoreBreakdown,
    candidate_actions,
    mitigation_score,
    score_breakdown,
    select_action,
)
from src.mitigation.transitions import TransitionModel, estimate_transition, should_failover

__all__ = [
    "ScoreBreakdown",
    "mitigation_score",
    "score_breakdown",
    "select_action",
    "candidate_actions",
    "TransitionModel",
    "estimate_transition",
    "should_failover",
]
