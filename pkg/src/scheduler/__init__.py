"""Checkpoint scheduling package."""

from src.scheduler.checkpoint import CheckpointRate, checkpoint_rate, rate_to_interval

__all__ = ["CheckpointRate", "checkpoint_rate", "rate_to_interval"]
