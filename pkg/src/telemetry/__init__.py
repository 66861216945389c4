"""Synthetic telemetry package."""

from src.telemetry.codec import dump_trace, load_trace
from src.telemetry.features import (
    label_matrix,
    label_windows,
    node_loads,
    system_load,
    windows_to_arrays,
)
from src.telemetry.generator import generate_trace, overlay_fault

__all__ = [
    "generate_trace",
    "overlay_fault",
    "system_load",
    "node_loads",
    "label_windows",
    "label_matrix",
    "windows_to_arrays",
    "dump_trace",
    "load_trace",
]
