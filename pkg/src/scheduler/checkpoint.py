"""Adaptive checkpoint frequency and its conversion to an interval."""

import math

from pydantic import BaseModel, ConfigDict, Field

from src.models.scenario import SchedulerConfig
from src.models.telemetry import SystemLoad
from src.predictor.model import FaultProbability


class CheckpointRate(BaseModel):
    """λ_t in checkpoints per tick."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., ge=0.0, allow_inf_nan=False)


def checkpoint_rate(p: FaultProbability, load: SystemLoad, cfg: SchedulerConfig) -> CheckpointRate:
    """λ_t = α·P(fault_t) + β·I_t."""
    return CheckpointRate(value=cfg.alpha * p.value + cfg.beta * load.value)


def rate_to_interval(rate: CheckpointRate, cfg: SchedulerConfig) -> int:
    """clamp(round(1/λ_t), min_interval, max_interval); a zero rate maps to max_interval."""
    if rate.value <= 0.0:
        return cfg.max_interval
    inverse = 1.0 / rate.value
    if not math.isfinite(inverse) or inverse >= cfg.max_interval:
        return cfg.max_interval
    interval = round(inverse)
    return max(cfg.min_interval, min(cfg.max_interval, interval))
