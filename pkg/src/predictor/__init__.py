"""Fault prediction package."""

from src.predictor.codec import dump_weights, dumps_weights, load_weights, loads_weights
from src.predictor.model import (
    FaultProbability,
    PredictorWeights,
    is_warning,
    predict_batch,
    predict_fault,
)
from src.predictor.trainer import (
    TrainingResult,
    fit,
    loss_and_gradients,
    train,
    train_for_scenario,
    training_arrays,
)

__all__ = [
    "FaultProbability",
    "PredictorWeights",
    "predict_fault",
    "predict_batch",
    "is_warning",
    "train",
    "fit",
    "loss_and_gradients",
    "TrainingResult",
    "train_for_scenario",
    "training_arrays",
    "dump_weights",
    "load_weights",
    "dumps_weights",
    "loads_weights",
]
