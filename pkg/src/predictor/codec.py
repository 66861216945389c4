"""Versioned text format for predictor weights.

Layout::

    # ftsim-predictor
    format_version=1
    dims=6,8,1
    W0 <row-major values of the 6x8 matrix, comma-separated>
    b0 <8 values>
    w_out <8 values>
    b_out <value>
"""

from pathlib import Path

import numpy as np

from src.errors import ConfigurationError
from src.predictor.model import PredictorWeights

WEIGHTS_FORMAT_VERSION = 1
_MAGIC = "# ftsim-predictor"


def _row(values: np.ndarray) -> str:
    return ",".join(repr(float(v)) for v in values.ravel())


def dumps_weights(weights: PredictorWeights) -> str:
    lines = [
        _MAGIC,
        f"format_version={WEIGHTS_FORMAT_VERSION}",
        "dims=" + ",".join(str(d) for d in weights.layer_sizes),
    ]
    for i, (weight, bias) in enumerate(weights.hidden_layers):
        lines.append(f"W{i} {_row(weight)}")
        lines.append(f"b{i} {_row(bias)}")
    lines.append(f"w_out {_row(weights.output_weights)}")
    lines.append(f"b_out {weights.output_bias!r}")
    return "\n".join(lines) + "\n"


def loads_weights(text: str) -> PredictorWeights:
    """Parse weights text; any structural problem surfaces as ConfigurationError."""
    try:
        return _parse_weights(text)
    except ConfigurationError:
        raise
    except (IndexError, KeyError, ValueError) as exc:
        raise ConfigurationError(f"malformed predictor weights file: {exc!r}") from exc


def _parse_weights(text: str) -> PredictorWeights:
    lines = text.splitlines()
    if not lines or lines[0] != _MAGIC:
        raise ConfigurationError("not a predictor weights file")
    if lines[1] != f"format_version={WEIGHTS_FORMAT_VERSION}":
        raise ConfigurationError("unsupported predictor weights format_version")
    dims = [int(d) for d in lines[2].removeprefix("dims=").split(",")]
    if len(dims) < 2 or dims[-1] != 1:
        raise ConfigurationError(f"bad dims header {lines[2]!r}")

    rows = {}
    for line in lines[3:]:
        if line:
            key, _, payload = line.partition(" ")
            rows[key] = np.array([float(v) for v in payload.split(",")], dtype=np.float64)

    layers = []
    for i in range(len(dims) - 2):
        weight = rows[f"W{i}"].reshape(dims[i], dims[i + 1])
        layers.append((weight, rows[f"b{i}"]))
    output = rows["w_out"]
    if output.shape[0] != dims[-2]:
        raise ConfigurationError("output weight count disagrees with dims header")
    return PredictorWeights(tuple(layers), output, float(rows["b_out"][0]))


def dump_weights(weights: PredictorWeights, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_weights(weights), encoding="utf-8")
    return path


def load_weights(path: Path) -> PredictorWeights:
    return loads_weights(Path(path).read_text(encoding="utf-8"))
