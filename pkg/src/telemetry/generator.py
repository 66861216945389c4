"""Seeded synthetic telemetry with ground-truth fault schedules.

Faults arrive as independent Poisson processes per (node, kind). Before every
fault the indicators named in the scenario's precursor map ramp linearly over
the precursor window, so faults are predictable from telemetry. While a fault
is active its signature is written into the trace with ``overlay_fault``; the
simulator observes these rows as they are.
"""

import numpy as np

from src.errors import ConfigurationError
from src.models.scenario import ScenarioConfig
from src.models.telemetry import FaultEventSpec, FaultKind, TelemetryTrace
from src.utils.logger import get_logger

logger = get_logger("telemetry")

# Indicators raised while a transient fault is active
FAULT_SIGNATURES: dict[FaultKind, tuple[str, ...]] = {
    FaultKind.NETWORK_INSTABILITY: ("net_latency_norm",),
    FaultKind.RESOURCE_OVERLOAD: ("cpu_util", "queue_depth_norm"),
}
OVERLAY_BASE = 0.4
OVERLAY_SPAN = 0.5

KINDS: tuple[FaultKind, ...] = tuple(FaultKind)


def overlay_level(severity: float) -> float:
    return OVERLAY_BASE + OVERLAY_SPAN * severity


def overlay_fault(
    block: np.ndarray,
    kind: FaultKind,
    severity: float,
    index: dict[str, int],
) -> None:
    """Write a fault's telemetry signature into ``block`` in place.

    ``block`` is any view whose last axis is the indicator axis. A failed node
    reports nothing, so HardwareFailure zeroes the whole block.
    """
    if kind is FaultKind.HARDWARE_FAILURE:
        block[...] = 0.0
        return
    level = overlay_level(severity)
    for name in FAULT_SIGNATURES[kind]:
        i = index.get(name)
        if i is not None:
            np.maximum(block[..., i], level, out=block[..., i])


def validate_scenario(scenario: ScenarioConfig) -> None:
    """Reject scenarios that cannot produce a trace."""
    telemetry = scenario.telemetry
    if telemetry.horizon < 1:
        raise ConfigurationError("telemetry.horizon must be at least 1")
    if telemetry.node_count < 1:
        raise ConfigurationError("telemetry.node_count must be at least 1")
    if telemetry.indicator_count < 1:
        raise ConfigurationError("telemetry.indicators must not be empty")


def generate_trace(
    scenario: ScenarioConfig,
    seed: int,
    horizon: int | None = None,
) -> TelemetryTrace:
    """Generate a telemetry trace as a pure function of (scenario, seed).

    Args:
        scenario: Validated scenario configuration.
        seed: RNG seed.
        horizon: Optional tick count overriding the scenario's T (training traces).

    Returns:
        TelemetryTrace with values of shape (T, nodes, indicators).
    """
    validate_scenario(scenario)
    telemetry = scenario.telemetry
    ticks = horizon if horizon is not None else telemetry.horizon
    if ticks < 1:
        raise ConfigurationError("trace horizon must be at least 1")

    rng = np.random.default_rng(seed)
    schedule = _sample_schedule(scenario, rng, ticks)

    nodes = telemetry.node_count
    n = telemetry.indicator_count
    index = {name: i for i, name in enumerate(telemetry.indicators)}
    baselines = np.asarray(telemetry.baselines, dtype=np.float64)

    noise = rng.normal(0.0, telemetry.noise_sigma, size=(ticks, nodes, n))
    values = baselines[np.newaxis, np.newaxis, :] + noise

    load_mask = np.asarray(telemetry.load_weights, dtype=np.float64) > 0.0
    for burst in telemetry.bursts:
        start, end = burst.start, min(burst.start + burst.length, ticks)
        if start < end:
            values[start:end, :, load_mask] += burst.load_boost

    values += _precursor_ramps(scenario, schedule, ticks, baselines, index)
    np.clip(values, 0.0, 1.0, out=values)

    for fault in schedule:
        end = min(fault.end_tick, ticks)
        block = values[fault.tick:end, fault.target_node, :]
        overlay_fault(block, fault.kind, fault.severity, index)

    values.setflags(write=False)
    logger.debug("trace_generated", seed=seed, ticks=ticks, nodes=nodes, faults=len(schedule))
    return TelemetryTrace(
        indicators=tuple(telemetry.indicators),
        values=values,
        fault_schedule=tuple(schedule),
        seed=seed,
    )


def _burst_multiplier(scenario: ScenarioConfig, ticks: int) -> np.ndarray:
    multiplier = np.ones(ticks, dtype=np.float64)
    for burst in scenario.telemetry.bursts:
        start, end = burst.start, min(burst.start + burst.length, ticks)
        if start < end:
            multiplier[start:end] *= burst.multiplier
    return multiplier


def _sample_schedule(
    scenario: ScenarioConfig,
    rng: np.random.Generator,
    ticks: int,
) -> list[FaultEventSpec]:
    faults_cfg = scenario.faults
    nodes = scenario.telemetry.node_count
    total_weight = sum(faults_cfg.kind_weights.get(kind, 0.0) for kind in KINDS)
    cluster_rate = faults_cfg.rate * faults_cfg.rate_scale

    events: dict[tuple[int, int, FaultKind], FaultEventSpec] = {}
    if cluster_rate > 0.0 and total_weight > 0.0:
        shares = np.array([faults_cfg.kind_weights.get(k, 0.0) / total_weight for k in KINDS])
        per_cell = cluster_rate * shares / nodes
        rates = _burst_multiplier(scenario, ticks)[:, np.newaxis, np.newaxis] * per_cell
        rates = np.broadcast_to(rates, (ticks, nodes, len(KINDS)))
        hits = np.argwhere(rng.poisson(rates) > 0)

        m = len(hits)
        severities = rng.uniform(faults_cfg.severity_min, faults_cfg.severity_max, size=m)
        transient = rng.geometric(1.0 / faults_cfg.transient_mean_ticks, size=m)
        repair = rng.geometric(1.0 / faults_cfg.repair_mean_ticks, size=m)
        for (tick, node, k), sev, t_dur, r_dur in zip(hits, severities, transient, repair):
            kind = KINDS[k]
            duration = r_dur if kind is FaultKind.HARDWARE_FAILURE else t_dur
            events[(int(tick), int(node), kind)] = FaultEventSpec(
                tick=int(tick),
                kind=kind,
                target_node=int(node),
                severity=float(min(max(sev, 1e-9), 1.0)),
                duration=int(duration),
            )

    for scripted in faults_cfg.scripted:
        if scripted.tick >= ticks:
            continue
        if scripted.duration is not None:
            duration = scripted.duration
        elif scripted.kind is FaultKind.HARDWARE_FAILURE:
            duration = round(faults_cfg.repair_mean_ticks)
        else:
            duration = round(faults_cfg.transient_mean_ticks)
        events[(scripted.tick, scripted.node, scripted.kind)] = FaultEventSpec(
            tick=scripted.tick,
            kind=scripted.kind,
            target_node=scripted.node,
            severity=scripted.severity,
            duration=duration,
        )

    return sorted(events.values(), key=FaultEventSpec.sort_key)


def _precursor_ramps(
    scenario: ScenarioConfig,
    schedule: list[FaultEventSpec],
    ticks: int,
    baselines: np.ndarray,
    index: dict[str, int],
) -> np.ndarray:
    telemetry = scenario.telemetry
    window = telemetry.precursor_window
    ramps = np.zeros((ticks, telemetry.node_count, telemetry.indicator_count))
    headroom = np.maximum(telemetry.precursor_peak - baselines, 0.0)

    for fault in schedule:
        columns = [index[name] for name in telemetry.precursor_map.get(fault.kind, [])]
        if not columns:
            continue
        for k in range(1, window + 1):
            t = fault.tick - k
            if t < 0:
                break
            fraction = (window - k + 1) / window
            rise = fault.severity * fraction * headroom[columns]
            row = ramps[t, fault.target_node]
            row[columns] = np.maximum(row[columns], rise)
    return ramps
