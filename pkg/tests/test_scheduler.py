"""Tests for the checkpoint rate and interval."""

import numpy as np
import pytest
from pydantic import ValidationError

from src.models.scenario import SchedulerConfig
from src.models.telemetry import SystemLoad
from src.predictor.model import FaultProbability
from src.scheduler.checkpoint import CheckpointRate, checkpoint_rate, rate_to_interval


def _rate(p: float, load: float, **cfg) -> float:
    return checkpoint_rate(
        FaultProbability(value=p), SystemLoad(value=load), SchedulerConfig(**cfg)
    ).value


class TestCheckpointRate:
    def test_zero_inputs_give_zero(self):
        assert _rate(0.0, 0.0) == 0.0

    def test_affine_form(self):
        assert _rate(0.5, 0.5, alpha=2.0, beta=1.0) == 1.5

    def test_exact_for_random_inputs(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            alpha, beta, p, load = rng.uniform(0.0, 1.0, size=4)
            assert _rate(p, load, alpha=alpha, beta=beta) == alpha * p + beta * load

    def test_nondecreasing_in_probability(self):
        rates = [_rate(p, 0.3, alpha=1.5, beta=0.5) for p in np.linspace(0.0, 1.0, 21)]
        assert all(a <= b for a, b in zip(rates, rates[1:]))


class TestRateToInterval:
    def test_zero_rate_gives_max_interval(self):
        assert rate_to_interval(CheckpointRate(value=0.0), SchedulerConfig(max_interval=77)) == 77

    def test_high_rate_rounds_to_one(self):
        cfg = SchedulerConfig(min_interval=1, max_interval=100)
        assert rate_to_interval(CheckpointRate(value=1.5), cfg) == 1

    def test_low_rate_clamps_to_max(self):
        cfg = SchedulerConfig(min_interval=1, max_interval=50)
        assert rate_to_interval(CheckpointRate(value=0.01), cfg) == 50

    @pytest.mark.parametrize("value", [1e-310, 5e-324, 1e-300])
    def test_tiny_rate_gives_max_interval(self, value):
        assert rate_to_interval(CheckpointRate(value=value), SchedulerConfig()) == 200

    def test_clamps_to_min(self):
        cfg = SchedulerConfig(min_interval=5, max_interval=50)
        assert rate_to_interval(CheckpointRate(value=0.9), cfg) == 5

    def test_interval_nonincreasing_in_rate(self):
        cfg = SchedulerConfig(min_interval=1, max_interval=200)
        intervals = [
            rate_to_interval(CheckpointRate(value=r), cfg) for r in np.linspace(0.0, 2.0, 101)
        ]
        assert all(a >= b for a, b in zip(intervals, intervals[1:]))


class TestSchedulerConfig:
    def test_min_above_max_rejected(self):
        with pytest.raises(ValidationError):
            SchedulerConfig(min_interval=10, max_interval=5)

    def test_both_weights_zero_rejected(self):
        with pytest.raises(ValidationError):
            SchedulerConfig(alpha=0.0, beta=0.0)
