"""Line-oriented text format for telemetry traces.

Layout::

    # ftsim-trace
    format_version=1
    seed=<int>
    ticks=<T>
    nodes=<N>
    indicators=<name>,<name>,...
    [telemetry]
    tick,node,<name>,<name>,...
    0,0,0.0612...,...
    ...
    [faults]
    tick,node,kind,severity,duration
    100,3,HardwareFailure,0.81...,37

Telemetry rows are ordered by tick then node. Floats use ``repr`` so a
dump/load round trip is exact.
"""

from pathlib import Path

import numpy as np

from src.errors import ConfigurationError
from src.models.telemetry import FaultEventSpec, FaultKind, TelemetryTrace

TRACE_FORMAT_VERSION = 1
_MAGIC = "# ftsim-trace"


def dump_trace(trace: TelemetryTrace, path: Path) -> Path:
    """Write a trace to ``path`` and return it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = ",".join(trace.indicators)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{_MAGIC}\n")
        fh.write(f"format_version={TRACE_FORMAT_VERSION}\n")
        fh.write(f"seed={trace.seed}\n")
        fh.write(f"ticks={trace.horizon}\n")
        fh.write(f"nodes={trace.node_count}\n")
        fh.write(f"indicators={names}\n")
        fh.write("[telemetry]\n")
        fh.write(f"tick,node,{names}\n")
        for t in range(trace.horizon):
            for node in range(trace.node_count):
                row = ",".join(repr(float(v)) for v in trace.values[t, node])
                fh.write(f"{t},{node},{row}\n")
        fh.write("[faults]\n")
        fh.write("tick,node,kind,severity,duration\n")
        for fault in trace.fault_schedule:
            fh.write(
                f"{fault.tick},{fault.target_node},{fault.kind.value},"
                f"{fault.severity!r},{fault.duration}\n"
            )
    return path


def load_trace(path: Path) -> TelemetryTrace:
    """Read a trace written by ``dump_trace``; damage raises ConfigurationError."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    try:
        return _parse_trace(lines, path)
    except ConfigurationError:
        raise
    except (IndexError, KeyError, ValueError) as exc:
        raise ConfigurationError(f"{path}: malformed trace file: {exc!r}") from exc


def _parse_trace(lines: list[str], path: Path) -> TelemetryTrace:
    if not lines or lines[0] != _MAGIC:
        raise ConfigurationError(f"{path}: not a trace file")

    header: dict[str, str] = {}
    pos = 1
    while pos < len(lines) and lines[pos] != "[telemetry]":
        key, _, value = lines[pos].partition("=")
        header[key] = value
        pos += 1
    if int(header.get("format_version", -1)) != TRACE_FORMAT_VERSION:
        raise ConfigurationError(f"{path}: unsupported trace format_version")

    indicators = tuple(header["indicators"].split(","))
    ticks, nodes = int(header["ticks"]), int(header["nodes"])
    values = np.zeros((ticks, nodes, len(indicators)), dtype=np.float64)

    pos += 2  # section marker and column header
    rows = 0
    while pos < len(lines) and lines[pos] != "[faults]":
        fields = lines[pos].split(",")
        t, node = int(fields[0]), int(fields[1])
        values[t, node] = [float(v) for v in fields[2:]]
        rows += 1
        pos += 1
    if pos >= len(lines):
        raise ConfigurationError(f"{path}: missing [faults] section")
    if rows != ticks * nodes:
        raise ConfigurationError(f"{path}: {rows} telemetry rows, expected {ticks * nodes}")

    schedule = []
    for line in lines[pos + 2:]:
        if not line:
            continue
        tick, node, kind, severity, duration = line.split(",")
        schedule.append(
            FaultEventSpec(
                tick=int(tick),
                target_node=int(node),
                kind=FaultKind(kind),
                severity=float(severity),
                duration=int(duration),
            )
        )

    values.setflags(write=False)
    return TelemetryTrace(
        indicators=indicators,
        values=values,
        fault_schedule=tuple(schedule),
        seed=int(header["seed"]),
    )
