"""Full-batch gradient descent on mean binary cross-entropy."""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from src.errors import DimensionError, InputError, TrainingError
from src.models.scenario import PredictorConfig, ScenarioConfig
from src.models.telemetry import LabeledWindow
from src.predictor.model import PredictorWeights, forward, sigmoid
from src.telemetry.features import label_matrix, windows_to_arrays
from src.telemetry.generator import generate_trace
from src.utils.logger import get_logger

logger = get_logger("predictor")

INIT_SCALE = 0.1


@dataclass
class TrainingResult:
    weights: PredictorWeights
    loss_history: list[float] = field(default_factory=list)

    @property
    def final_loss(self) -> float:
        return self.loss_history[-1] if self.loss_history else float("nan")


def initial_weights(input_dim: int, hidden_sizes: Sequence[int], seed: int) -> PredictorWeights:
    """Uniform [-0.1, 0.1] initialization drawn from ``seed``."""
    rng = np.random.default_rng(seed)
    layers = []
    fan_in = input_dim
    for units in hidden_sizes:
        weight = rng.uniform(-INIT_SCALE, INIT_SCALE, size=(fan_in, units))
        bias = rng.uniform(-INIT_SCALE, INIT_SCALE, size=units)
        layers.append((weight, bias))
        fan_in = units
    out_w = rng.uniform(-INIT_SCALE, INIT_SCALE, size=fan_in)
    out_b = float(rng.uniform(-INIT_SCALE, INIT_SCALE))
    return PredictorWeights(tuple(layers), out_w, out_b)


def _bce_from_logits(logits: np.ndarray, labels: np.ndarray) -> float:
    # log(1 + e^z) - y·z, stable for large |z|
    softplus = np.logaddexp(0.0, logits)
    return float(np.mean(softplus - labels * logits))


def training_loss(weights: PredictorWeights, features: np.ndarray, labels: np.ndarray) -> float:
    _, logits = forward(weights, features)
    return _bce_from_logits(logits, labels)


def loss_and_gradients(
    weights: PredictorWeights,
    features: np.ndarray,
    labels: np.ndarray,
) -> tuple[float, PredictorWeights]:
    """Mean BCE and its analytic gradient, packaged like the weights."""
    activations, logits = forward(weights, features)
    loss = _bce_from_logits(logits, labels)

    m = features.shape[0]
    delta = (sigmoid(logits) - labels) / m
    last = activations[-1]
    grad_out_w = last.T @ delta
    grad_out_b = float(delta.sum())

    grads: list[tuple[np.ndarray, np.ndarray]] = []
    upstream = np.outer(delta, weights.output_weights)
    for i in range(len(weights.hidden_layers) - 1, -1, -1):
        weight, _ = weights.hidden_layers[i]
        h = activations[i + 1]
        pre = upstream * (1.0 - h * h)
        grads.append((activations[i].T @ pre, pre.sum(axis=0)))
        upstream = pre @ weight.T
    grads.reverse()

    return loss, PredictorWeights(tuple(grads), grad_out_w, grad_out_b)


def fit(
    features: np.ndarray,
    labels: np.ndarray,
    config: PredictorConfig,
    seed: int,
) -> TrainingResult:
    """Train on stacked arrays; see ``train`` for the window-based entry point."""
    if features.shape[0] == 0:
        raise InputError("training set is empty")
    if labels.shape != (features.shape[0],):
        raise DimensionError("labels must have one entry per feature row")
    positives = int(labels.sum())
    if positives == 0 or positives == labels.shape[0]:
        logger.warning("single_class_training_set", rows=labels.shape[0], positives=positives)

    weights = initial_weights(features.shape[1], config.hidden_sizes, seed)
    params = weights.flatten()
    history: list[float] = []
    lr = config.learning_rate

    for epoch in range(config.epochs):
        loss, grads = loss_and_gradients(weights, features, labels)
        if not np.isfinite(loss):
            raise TrainingError(epoch=epoch, loss=loss)
        history.append(loss)
        params = params - lr * grads.flatten()
        if not np.all(np.isfinite(params)):
            raise TrainingError(epoch=epoch, loss=loss)
        weights = weights.with_flat(params)

    final = training_loss(weights, features, labels)
    if not np.isfinite(final):
        raise TrainingError(epoch=config.epochs, loss=final)
    history.append(final)

    logger.info(
        "predictor_trained",
        rows=features.shape[0],
        positives=positives,
        epochs=config.epochs,
        hidden_sizes=config.hidden_sizes,
        initial_loss=round(history[0], 6),
        final_loss=round(final, 6),
    )
    return TrainingResult(weights=weights, loss_history=history)


def train(
    data: Sequence[LabeledWindow],
    config: PredictorConfig,
    seed: int,
) -> PredictorWeights:
    """Fit predictor weights to labeled windows.

    Args:
        data: Labeled windows; needs both classes for a meaningful fit.
        config: Learning rate, epochs and hidden layer sizes.
        seed: Initialization seed.

    Returns:
        Trained weights, deterministic for (data, config, seed).
    """
    features, labels = windows_to_arrays(data)
    return fit(features, labels, config, seed).weights


def training_arrays(scenario: ScenarioConfig) -> tuple[np.ndarray, np.ndarray]:
    """Every (tick, node) window of the scenario's training traces, stacked."""
    horizon = scenario.predictor.training_horizon
    features: list[np.ndarray] = []
    labels: list[np.ndarray] = []
    for seed in scenario.predictor.training_seeds:
        trace = generate_trace(scenario, seed, horizon=horizon)
        features.append(trace.values.reshape(-1, trace.indicator_count))
        labels.append(label_matrix(trace, scenario.fault_horizon).reshape(-1).astype(np.float64))
    return np.concatenate(features), np.concatenate(labels)


def train_for_scenario(scenario: ScenarioConfig) -> TrainingResult:
    """Train once on the held-out training seeds of ``scenario``."""
    features, labels = training_arrays(scenario)
    logger.info(
        "training_started",
        seeds=scenario.predictor.training_seeds,
        rows=features.shape[0],
    )
    return fit(features, labels, scenario.predictor, seed=scenario.predictor.training_seeds[0])
