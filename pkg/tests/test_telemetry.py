"""Tests for trace generation, load and labeled windows."""

import numpy as np
import pytest

from src.errors import ConfigurationError, DimensionError, InputError, UnknownNodeError
from src.models.scenario import ScenarioConfig
from src.models.telemetry import FaultEventSpec, FaultKind, MetricVector
from src.telemetry.codec import dump_trace, load_trace
from src.telemetry.features import label_matrix, label_windows, node_loads, system_load
from src.telemetry.generator import generate_trace
from tests.conftest import blank_trace, make_scenario

UNIFORM = [1 / 6] * 6


def _fault(tick: int, node: int = 0, kind: FaultKind = FaultKind.HARDWARE_FAILURE):
    return FaultEventSpec(tick=tick, kind=kind, target_node=node, severity=1.0, duration=5)


class TestGenerateTrace:
    def test_zero_rate_gives_empty_schedule(self, quiet_scenario):
        trace = generate_trace(quiet_scenario, seed=3)
        assert trace.fault_schedule == ()

    def test_same_seed_same_trace(self, small_scenario):
        first = generate_trace(small_scenario, seed=7)
        second = generate_trace(small_scenario, seed=7)
        assert first.identical_to(second)

    def test_different_seeds_differ(self, small_scenario):
        assert not generate_trace(small_scenario, 1).identical_to(generate_trace(small_scenario, 2))

    def test_shape_range_and_read_only(self, small_scenario):
        trace = generate_trace(small_scenario, seed=0)
        assert trace.values.shape == (300, 6, 6)
        assert trace.values.min() >= 0.0
        assert trace.values.max() <= 1.0
        assert not trace.values.flags.writeable

    def test_schedule_sorted_and_inside_horizon(self, small_scenario):
        trace = generate_trace(small_scenario, seed=0)
        keys = [f.sort_key() for f in trace.fault_schedule]
        assert keys == sorted(keys)
        assert all(0 <= f.tick < 300 and 0 <= f.target_node < 6 for f in trace.fault_schedule)

    def test_horizon_override(self, small_scenario):
        assert generate_trace(small_scenario, seed=0, horizon=50).horizon == 50

    def test_default_fault_process_averages_sixty(self):
        scenario = ScenarioConfig()
        counts = [len(generate_trace(scenario, seed).fault_schedule) for seed in range(10)]
        assert 50 <= np.mean(counts) <= 70
        assert all(35 <= c <= 85 for c in counts)

    def test_scripted_fault_precursor_and_overlay(self):
        scenario = make_scenario(
            telemetry={"noise_sigma": 0.0},
            faults={
                "rate": 0.0,
                "scripted": [{"tick": 100, "node": 2, "kind": "HardwareFailure", "duration": 20}],
            },
        )
        trace = generate_trace(scenario, seed=0)
        assert len(trace.fault_schedule) == 1
        mem = trace.indicators.index("mem_util")
        cpu = trace.indicators.index("cpu_util")

        # full ramp one tick before the fault, baseline well before it
        assert trace.values[99, 2, mem] == pytest.approx(1.0)
        assert trace.values[80, 2, mem] == pytest.approx(0.06)
        assert trace.values[99, 2, cpu] == pytest.approx(0.06)
        # a down node reports nothing
        assert np.all(trace.values[100:120, 2] == 0.0)
        assert trace.values[120, 2, mem] == pytest.approx(0.06)
        # other nodes are untouched
        assert trace.values[99, 1, mem] == pytest.approx(0.06)

    def test_network_overlay_raises_latency(self):
        scenario = make_scenario(
            telemetry={"noise_sigma": 0.0},
            faults={
                "rate": 0.0,
                "scripted": [
                    {
                        "tick": 50,
                        "node": 1,
                        "kind": "NetworkInstability",
                        "severity": 0.5,
                        "duration": 10,
                    }
                ],
            },
        )
        trace = generate_trace(scenario, seed=0)
        latency = trace.indicators.index("net_latency_norm")
        assert np.all(trace.values[50:60, 1, latency] >= 0.65 - 1e-12)
        assert trace.values[60, 1, latency] == pytest.approx(0.03)

    def test_burst_raises_fault_count(self):
        calm = make_scenario(telemetry={"horizon": 2000}, faults={"rate": 0.01})
        bursty = make_scenario(
            telemetry={
                "horizon": 2000,
                "bursts": [{"start": 0, "length": 2000, "multiplier": 5.0, "load_boost": 0.0}],
            },
            faults={"rate": 0.01},
        )
        calm_total = sum(len(generate_trace(calm, s).fault_schedule) for s in range(5))
        bursty_total = sum(len(generate_trace(bursty, s).fault_schedule) for s in range(5))
        assert bursty_total > 2 * calm_total


class TestSystemLoad:
    def test_zero_vector(self):
        assert system_load(MetricVector(tick=0, values=(0.0,) * 6), UNIFORM).value == 0.0

    def test_all_ones(self):
        weights = [0.3, 0.25, 0.05, 0.1, 0.0, 0.3]
        assert system_load(MetricVector(tick=0, values=(1.0,) * 6), weights).value == (
            pytest.approx(1.0)
        )

    def test_uniform_weights_give_mean(self):
        values = (0.2, 0.4, 0.6, 0.1, 0.0, 0.5)
        load = system_load(MetricVector(tick=0, values=values), UNIFORM)
        assert load.value == pytest.approx(np.mean(values))

    def test_monotone_in_each_indicator(self):
        rng = np.random.default_rng(0)
        weights = [0.3, 0.25, 0.05, 0.1, 0.0, 0.3]
        for _ in range(50):
            base = rng.uniform(0.0, 0.9, size=6)
            i = int(rng.integers(6))
            raised = base.copy()
            raised[i] += 0.1
            low = system_load(MetricVector(tick=0, values=tuple(base)), weights)
            high = system_load(MetricVector(tick=0, values=tuple(raised)), weights)
            assert high.value >= low.value

    def test_weights_must_be_convex(self):
        with pytest.raises(ConfigurationError):
            system_load(MetricVector(tick=0, values=(0.5,) * 6), [0.5] * 6)

    def test_weights_must_match_dimension(self):
        with pytest.raises(DimensionError):
            system_load(MetricVector(tick=0, values=(0.5,) * 6), [0.5, 0.5])

    def test_node_loads_matches_scalar_form(self, small_scenario):
        trace = generate_trace(small_scenario, seed=0)
        weights = small_scenario.telemetry.load_weights
        loads = node_loads(trace.values, weights)
        assert loads.shape == (300, 6)
        assert loads[17, 3] == pytest.approx(system_load(trace.vector(3, 17), weights).value)


class TestLabelWindows:
    def test_empty_schedule_all_false(self):
        windows = label_windows(blank_trace(50, 2), node=0, horizon=10)
        assert len(windows) == 50
        assert not any(w.label for w in windows)

    def test_single_fault_labels_preceding_window(self):
        trace = blank_trace(200, 2, faults=(_fault(100),))
        windows = label_windows(trace, node=0, horizon=10)
        positive = [w.features.tick for w in windows if w.label]
        assert positive == list(range(90, 100))
        # the other node never sees it
        assert not any(w.label for w in label_windows(trace, node=1, horizon=10))

    def test_horizon_spanning_trace(self):
        trace = blank_trace(200, 1, faults=(_fault(100),))
        labels = [w.label for w in label_windows(trace, node=0, horizon=200)]
        assert labels == [True] * 100 + [False] * 100

    def test_matches_brute_force_scan(self):
        faults = (_fault(5), _fault(12), _fault(30, node=1), _fault(31))
        trace = blank_trace(40, 2, faults=faults)
        horizon = 4
        labels = label_matrix(trace, horizon)
        for t in range(40):
            for node in range(2):
                expected = any(
                    f.target_node == node and t < f.tick <= t + horizon for f in faults
                )
                assert labels[t, node] == expected

    def test_unknown_node(self):
        with pytest.raises(UnknownNodeError):
            label_windows(blank_trace(10, 2), node=2, horizon=1)

    def test_horizon_must_be_positive(self):
        with pytest.raises(InputError):
            label_windows(blank_trace(10, 2), node=0, horizon=0)


class TestTraceCodec:
    def test_dump_and_load_are_exact(self, small_scenario, tmp_path):
        trace = generate_trace(small_scenario, seed=4)
        loaded = load_trace(dump_trace(trace, tmp_path / "trace.txt"))
        assert loaded.identical_to(trace)

    def test_rejects_other_files(self, tmp_path):
        path = tmp_path / "not_a_trace.txt"
        path.write_text("hello\n", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_trace(path)

    @pytest.mark.parametrize(
        "edit",
        [
            lambda lines: [line for i, line in enumerate(lines) if i not in (9, 10)],
            lambda lines: lines[: lines.index("[faults]")],
            lambda lines: lines[:8] + [lines[8].rsplit(",", 1)[0] + ",nan?"] + lines[9:],
            lambda lines: lines[:8] + ["0,0"] + lines[9:],
            lambda lines: lines + ["5,0,Meteor,0.5,3"],
        ],
        ids=["missing_rows", "no_faults_section", "bad_float", "short_row", "unknown_fault_kind"],
    )
    def test_damaged_file_raises_configuration_error(self, small_scenario, tmp_path, edit):
        path = dump_trace(generate_trace(small_scenario, seed=4), tmp_path / "trace.txt")
        lines = path.read_text(encoding="utf-8").splitlines()
        path.write_text("\n".join(edit(lines)) + "\n", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_trace(path)
