"""Experiment harness package."""

from src.pipeline.orchestrator import ExperimentPipeline, ExperimentResult, RunSpec, run_experiment
from src.pipeline.reports import ComparisonReport, RunRow, emit_reports
from src.pipeline.scenario import dump_scenario, load_scenario_text, parse_scenario, write_scenario

__all__ = [
    "ExperimentPipeline",
    "ExperimentResult",
    "RunSpec",
    "run_experiment",
    "ComparisonReport",
    "RunRow",
    "emit_reports",
    "parse_scenario",
    "load_scenario_text",
    "dump_scenario",
    "write_scenario",
]
