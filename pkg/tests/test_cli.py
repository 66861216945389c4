"""Tests for the ftsim command line."""

import pytest
from click.testing import CliRunner

from src.main import cli
from src.pipeline.scenario import write_scenario
from src.utils.logger import setup_logging
from tests.conftest import make_scenario, write_yaml


@pytest.fixture(autouse=True)
def _restore_logging():
    yield
    # CliRunner swaps sys.stderr; rebind the handler to the real one
    setup_logging()


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def scenario_file(tmp_path):
    scenario = make_scenario(strategies={"enabled": ["CP", "SM"]})
    return str(write_scenario(scenario, tmp_path / "small.yaml"))


class TestCommands:
    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "ftsim, version 0.1.0" in result.output

    def test_show_config(self, runner):
        result = runner.invoke(cli, ["show-config"])
        assert result.exit_code == 0
        assert "max_concurrent_runs" in result.output

    def test_run_quiet_writes_reports_and_events(self, runner, scenario_file, tmp_path):
        out = tmp_path / "out"
        result = runner.invoke(
            cli,
            ["run", "--scenario", scenario_file, "-s", "CP", "--seed", "0", "-o", str(out), "-q"],
        )
        assert result.exit_code == 0, result.output
        assert (out / "runs.csv").is_file()
        assert (out / "summary.json").is_file()
        assert (out / "events" / "CP_seed0.jsonl").is_file()

    def test_run_shows_comparison_table(self, runner, scenario_file, tmp_path):
        result = runner.invoke(
            cli,
            ["run", "--scenario", scenario_file, "-s", "SM", "--seeds", "1",
             "--no-events", "-o", str(tmp_path / "out")],
        )
        assert result.exit_code == 0, result.output
        assert "Configuration" in result.output
        assert "Done!" in result.output
        assert not (tmp_path / "out" / "events").exists()

    def test_compare_runs_enabled_strategies(self, runner, scenario_file, tmp_path):
        out = tmp_path / "cmp"
        result = runner.invoke(cli, ["compare", "--scenario", scenario_file, "-o", str(out), "-q"])
        assert result.exit_code == 0, result.output
        rows = (out / "runs.csv").read_text(encoding="utf-8").splitlines()[2:]
        assert [line.split(",")[2] for line in rows] == ["CP", "CP", "SM", "SM"]

    def test_train_writes_weights(self, runner, scenario_file, tmp_path):
        out = tmp_path / "model"
        result = runner.invoke(cli, ["train", "--scenario", scenario_file, "-o", str(out)])
        assert result.exit_code == 0, result.output
        assert "Final loss" in result.output
        text = (out / "predictor.txt").read_text(encoding="utf-8")
        assert text.startswith("# ftsim-predictor")

    def test_gen_trace(self, runner, scenario_file, tmp_path):
        result = runner.invoke(
            cli,
            ["gen-trace", "--scenario", scenario_file, "--seed", "3", "-o", str(tmp_path), "-q"],
        )
        assert result.exit_code == 0, result.output
        assert (tmp_path / "trace_seed3.txt").is_file()


class TestErrors:
    def test_invalid_scenario(self, runner, tmp_path):
        path = write_yaml(tmp_path / "bad.yaml", {"predictor": {"threshold": 1.5}})
        result = runner.invoke(cli, ["run", "--scenario", str(path), "-q"])
        assert result.exit_code == 1
        assert "ScenarioValidationError" in result.output
        assert "predictor.threshold" in result.output

    def test_missing_scenario(self, runner, tmp_path):
        result = runner.invoke(cli, ["compare", "--scenario", str(tmp_path / "nope.yaml"), "-q"])
        assert result.exit_code == 1
        assert "FileNotFoundError" in result.output

    def test_too_many_seeds(self, runner, scenario_file):
        result = runner.invoke(cli, ["compare", "--scenario", scenario_file, "--seeds", "5", "-q"])
        assert result.exit_code == 1
        assert "ConfigurationError" in result.output

    def test_training_seed_as_evaluation_seed(self, runner, scenario_file):
        result = runner.invoke(cli, ["run", "--scenario", scenario_file, "--seed", "1000", "-q"])
        assert result.exit_code == 1
        assert "overlap" in result.output

    def test_unknown_strategy_is_a_usage_error(self, runner, scenario_file):
        result = runner.invoke(cli, ["run", "--scenario", scenario_file, "-s", "Oracle"])
        assert result.exit_code == 2
