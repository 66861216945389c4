"""Tests for scenario loading, validation and normalized dumps."""

from pathlib import Path

import numpy as np
import pytest

from src.errors import ConfigurationError, ScenarioValidationError
from src.models.scenario import STRATEGY_ORDER, ScenarioConfig
from src.pipeline.scenario import (
    dump_scenario,
    load_scenario_text,
    parse_scenario,
    write_scenario,
)
from tests.conftest import make_scenario, write_yaml

SCENARIO_DIR = Path(__file__).resolve().parents[1] / "config" / "scenarios"
SHIPPED = sorted(SCENARIO_DIR.glob("*.yaml"))


class TestParseScenario:
    def test_minimal_file_gets_every_default(self, tmp_path):
        path = write_yaml(tmp_path / "minimal.yaml", {"name": "minimal"})
        scenario = parse_scenario(path)
        assert scenario == ScenarioConfig(name="minimal")
        assert scenario.node_count == 8
        assert scenario.horizon == 10000
        assert scenario.predictor.threshold == 0.7
        assert scenario.strategies.enabled == list(STRATEGY_ORDER)

    def test_empty_text_is_all_defaults(self):
        assert load_scenario_text("") == ScenarioConfig()

    def test_threshold_outside_unit_interval(self, tmp_path):
        path = write_yaml(tmp_path / "bad.yaml", {"predictor": {"threshold": 1.5}})
        with pytest.raises(ScenarioValidationError) as info:
            parse_scenario(path)
        assert info.value.field == "predictor.threshold"
        assert "(0, 1)" in info.value.constraint

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            parse_scenario(tmp_path / "absent.yaml")

    def test_top_level_must_be_mapping(self):
        with pytest.raises(ScenarioValidationError):
            load_scenario_text("- telemetry\n- faults\n")

    def test_malformed_yaml(self):
        with pytest.raises(ScenarioValidationError):
            load_scenario_text("telemetry: {node_count: [\n")

    def test_unknown_key_rejected(self):
        with pytest.raises(ScenarioValidationError) as info:
            load_scenario_text("telemetry:\n  nodes: 4\n")
        assert info.value.field.startswith("telemetry")

    def test_training_seeds_must_not_overlap(self):
        text = "predictor:\n  training_seeds: [3]\nexperiment:\n  seeds: [1, 2, 3]\n"
        with pytest.raises(ScenarioValidationError, match="overlap"):
            load_scenario_text(text)

    def test_more_tasks_than_nodes(self):
        with pytest.raises(ScenarioValidationError):
            load_scenario_text("telemetry:\n  node_count: 2\nsimulation:\n  task_count: 3\n")

    def test_scripted_fault_on_unknown_node(self):
        text = (
            "telemetry:\n  node_count: 2\n"
            "faults:\n  scripted:\n    - {tick: 5, node: 4, kind: HardwareFailure}\n"
        )
        with pytest.raises(ScenarioValidationError):
            load_scenario_text(text)

    def test_validation_error_is_a_configuration_error(self):
        with pytest.raises(ConfigurationError):
            load_scenario_text("scheduler:\n  min_interval: 50\n  max_interval: 10\n")

    def test_enabled_strategies_in_canonical_order(self):
        scenario = load_scenario_text("strategies:\n  enabled: [Adaptive, CP, SM]\n")
        assert scenario.strategies.enabled == ["CP", "SM", "Adaptive"]


class TestDumpScenario:
    @pytest.mark.parametrize("path", SHIPPED, ids=lambda p: p.stem)
    def test_shipped_scenarios_round_trip(self, path):
        scenario = parse_scenario(path)
        assert load_scenario_text(dump_scenario(scenario)) == scenario

    def test_shipped_scenarios_present(self):
        names = {p.stem for p in SHIPPED}
        expected = {"default", "comparison_protocol", "low_fault", "single_fault", "fault_sweep"}
        assert expected <= names

    def test_random_scenarios_round_trip(self):
        rng = np.random.default_rng(31)
        for _ in range(25):
            nodes = int(rng.integers(2, 12))
            scenario = make_scenario(
                telemetry={"node_count": nodes, "noise_sigma": float(rng.uniform(0, 0.2))},
                faults={"rate": float(rng.uniform(0, 0.05))},
                predictor={
                    "threshold": float(rng.uniform(0.05, 0.95)),
                    "hidden_sizes": [int(rng.integers(1, 10))],
                },
                scheduler={"alpha": float(rng.uniform(0.1, 2)), "beta": float(rng.uniform(0, 2))},
                mitigator={
                    "lambda1": float(rng.uniform(0, 3)),
                    "lambda2": float(rng.uniform(0.1, 3)),
                },
                simulation={"task_count": int(rng.integers(1, nodes + 1))},
            )
            assert load_scenario_text(dump_scenario(scenario)) == scenario

    def test_write_then_parse(self, small_scenario, tmp_path):
        path = write_scenario(small_scenario, tmp_path / "out" / "effective.yaml")
        assert parse_scenario(path) == small_scenario


class TestScenarioViews:
    def test_fault_scale_copy(self, small_scenario):
        scaled = small_scenario.with_fault_scale(2.0)
        assert scaled.faults.rate_scale == 2.0
        assert small_scenario.faults.rate_scale == 1.0
        assert scaled.telemetry == small_scenario.telemetry

    def test_single_fault_scenario_file(self):
        scenario = parse_scenario(SCENARIO_DIR / "single_fault.yaml")
        assert scenario.faults.rate == 0.0
        assert len(scenario.faults.scripted) == 1
        assert scenario.strategies.enabled == ["CP"]
