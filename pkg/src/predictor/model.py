"""Fault-probability model: a sigmoid unit over indicators, optionally behind tanh layers.

With no hidden layers the model is exactly P(fault) = σ(Σ w_i·x_i + b).
"""

import math
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.errors import DimensionError, NumericError
from src.models.telemetry import MetricVector


class FaultProbability(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float = Field(..., ge=0.0, le=1.0, allow_inf_nan=False)


@dataclass(frozen=True, eq=False)
class PredictorWeights:
    """Model parameters.

    ``hidden_layers`` holds (W, b) pairs with W of shape (inputs, units);
    ``output_weights`` has one entry per unit of the last layer (or per
    indicator when there are no hidden layers).
    """

    hidden_layers: tuple[tuple[np.ndarray, np.ndarray], ...]
    output_weights: np.ndarray
    output_bias: float
    input_dim: int = field(init=False)

    def __post_init__(self) -> None:
        dims = self.input_dim_from_layers()
        object.__setattr__(self, "input_dim", dims)

    def input_dim_from_layers(self) -> int:
        if self.hidden_layers:
            return int(self.hidden_layers[0][0].shape[0])
        return int(self.output_weights.shape[0])

    @property
    def layer_sizes(self) -> list[int]:
        """Widths from input to output, e.g. [6, 8, 1]."""
        return [self.input_dim] + [int(b.shape[0]) for _, b in self.hidden_layers] + [1]

    def parameters(self) -> list[np.ndarray]:
        params: list[np.ndarray] = []
        for weight, bias in self.hidden_layers:
            params.extend([weight, bias])
        params.extend([self.output_weights, np.array([self.output_bias])])
        return params

    def flatten(self) -> np.ndarray:
        return np.concatenate([p.ravel() for p in self.parameters()])

    def with_flat(self, vector: np.ndarray) -> "PredictorWeights":
        """Same architecture, parameters taken from ``vector``."""
        pos = 0
        layers = []
        for weight, bias in self.hidden_layers:
            w = vector[pos:pos + weight.size].reshape(weight.shape)
            pos += weight.size
            b = vector[pos:pos + bias.size].copy()
            pos += bias.size
            layers.append((w.copy(), b))
        out_w = vector[pos:pos + self.output_weights.size].copy()
        pos += self.output_weights.size
        return PredictorWeights(tuple(layers), out_w, float(vector[pos]))

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.parameters())

    def negated_output(self) -> "PredictorWeights":
        return PredictorWeights(self.hidden_layers, -self.output_weights, -self.output_bias)


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def forward(weights: PredictorWeights, features: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
    """Hidden activations (input first) and output logits for a batch."""
    activations = [features]
    h = features
    for weight, bias in weights.hidden_layers:
        h = np.tanh(h @ weight + bias)
        activations.append(h)
    logits = h @ weights.output_weights + weights.output_bias
    return activations, logits


def _check(weights: PredictorWeights, dimension: int) -> None:
    if dimension != weights.input_dim:
        raise DimensionError(f"model expects {weights.input_dim} indicators, got {dimension}")
    if not weights.is_finite():
        raise NumericError("predictor weights contain non-finite values")


def predict_batch(weights: PredictorWeights, features: np.ndarray) -> np.ndarray:
    """Fault probability for every row of a (rows, indicators) matrix."""
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    _check(weights, features.shape[1])
    _, logits = forward(weights, features)
    return sigmoid(logits)


def predict_fault(weights: PredictorWeights, x: MetricVector) -> FaultProbability:
    """P(fault_t) for one observation."""
    _check(weights, x.dimension)
    if not weights.hidden_layers:
        z = math.fsum(w * v for w, v in zip(weights.output_weights.tolist(), x.values))
        z += weights.output_bias
        return FaultProbability(value=float(sigmoid(np.array([z]))[0]))
    return FaultProbability(value=float(predict_batch(weights, x.as_array())[0]))


def is_warning(p: FaultProbability, threshold: float) -> bool:
    """True when the probability strictly exceeds θ."""
    return p.value > threshold
