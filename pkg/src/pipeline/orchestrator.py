"""Experiment orchestrator: train the predictor once, run every (strategy, seed)
pair, then write the comparison report."""

import asyncio
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from config.settings import settings
from src.errors import ExperimentRunError
from src.models.scenario import ScenarioConfig
from src.models.simulation import SimReport
from src.pipeline.reports import ComparisonReport, RunRow, emit_reports
from src.pipeline.scenario import write_scenario
from src.predictor.model import PredictorWeights
from src.predictor.trainer import train_for_scenario
from src.simulation.engine import run_simulation
from src.simulation.eventlog import export_events
from src.strategies.registry import PREDICTOR_STRATEGIES
from src.utils.logger import get_logger, run_context

logger = get_logger("pipeline")


@dataclass(frozen=True)
class RunSpec:
    """One unit of work: a strategy on one seed of one sweep point."""

    scenario_index: int
    rate_scale: float
    strategy: str
    seed: int

    @property
    def event_log_name(self) -> str:
        if self.scenario_index == 0:
            return f"{self.strategy}_seed{self.seed}.jsonl"
        return f"{self.strategy}_sweep{self.scenario_index}_seed{self.seed}.jsonl"


@dataclass
class ExperimentResult:
    """Result from an experiment run."""

    report: ComparisonReport
    out_dir: Path | None = None
    files: list[Path] = field(default_factory=list)
    weights: PredictorWeights | None = None

    run_id: str = field(default_factory=lambda: datetime.now().strftime("%Y%m%d_%H%M%S"))
    started_at: datetime = field(default_factory=datetime.now)
    completed_at: datetime | None = None

    @property
    def duration_seconds(self) -> float | None:
        if self.completed_at:
            return (self.completed_at - self.started_at).total_seconds()
        return None


class ExperimentPipeline:
    """Runs the comparison protocol for one scenario."""

    def __init__(
        self,
        scenario: ScenarioConfig,
        out_dir: Path | None = None,
        strategies: Sequence[str] | None = None,
        seeds: Sequence[int] | None = None,
        weights: PredictorWeights | None = None,
        write_event_logs: bool | None = None,
        max_concurrent_runs: int | None = None,
        write_files: bool = True,
        progress_callback: Callable[[str, int, int], None] | None = None,
    ):
        """Initialize the pipeline.

        Args:
            scenario: Validated scenario.
            out_dir: Output directory. Defaults to the scenario's, then settings.
            strategies: Strategy names. Defaults to the scenario's enabled list.
            seeds: Evaluation seeds. Defaults to the scenario's seeds.
            weights: Pre-trained predictor; trained on the training seeds when omitted.
            write_event_logs: Export every run's event log. Defaults to settings.
            max_concurrent_runs: Worker threads. Defaults to settings.
            write_files: Write report files at all.
            progress_callback: Called with (step, completed, total) after each run.
        """
        self.scenario = scenario
        self.out_dir = Path(out_dir or scenario.experiment.output_dir or settings.output_dir)
        self.strategies = list(strategies or scenario.strategies.enabled)
        self.seeds = list(seeds if seeds is not None else scenario.seeds)
        self.weights = weights
        self.write_event_logs = (
            settings.write_event_logs if write_event_logs is None else write_event_logs
        )
        self.max_concurrent_runs = max_concurrent_runs or settings.max_concurrent_runs
        self.write_files = write_files
        self.progress_callback = progress_callback

    def _progress(self, step: str, current: int, total: int) -> None:
        if self.progress_callback:
            self.progress_callback(step, current, total)

    @property
    def rate_scales(self) -> list[float]:
        return [self.scenario.faults.rate_scale, *self.scenario.experiment.fault_sweep]

    def run_specs(self) -> list[RunSpec]:
        return [
            RunSpec(index, scale, strategy, seed)
            for index, scale in enumerate(self.rate_scales)
            for strategy in self.strategies
            for seed in self.seeds
        ]

    async def run(self) -> ExperimentResult:
        """Train, run every spec, write reports.

        Raises:
            ExperimentRunError: A run failed; the partial report is written
                first with ``complete`` set to false.
        """
        report = ComparisonReport(
            scenario_name=self.scenario.name,
            strategies=self.strategies,
            rate_scales=self.rate_scales,
        )
        result = ExperimentResult(report=report, out_dir=self.out_dir if self.write_files else None)
        specs = self.run_specs()
        logger.info(
            "experiment_started",
            scenario=self.scenario.name,
            strategies=self.strategies,
            seeds=len(self.seeds),
            runs=len(specs),
        )

        if self.write_files:
            write_scenario(self.scenario, self.out_dir / "scenario.yaml")

        if self.weights is None and PREDICTOR_STRATEGIES & set(self.strategies):
            self._progress("Training predictor", 0, 1)
            training = await asyncio.to_thread(train_for_scenario, self.scenario)
            self.weights = training.weights
            self._progress("Training predictor", 1, 1)
        result.weights = self.weights

        semaphore = asyncio.Semaphore(self.max_concurrent_runs)
        done = 0

        async def execute(spec: RunSpec) -> RunRow:
            nonlocal done
            async with semaphore:
                row = await asyncio.to_thread(self._run_one, spec)
            done += 1
            self._progress("Running simulations", done, len(specs))
            return row

        outcomes = await asyncio.gather(*(execute(s) for s in specs), return_exceptions=True)

        failure: tuple[RunSpec, BaseException] | None = None
        for spec, outcome in zip(specs, outcomes):
            if isinstance(outcome, BaseException):
                if failure is None:
                    failure = (spec, outcome)
                continue
            report.rows.append(outcome)
        report.rows.sort(key=RunRow.sort_key)

        if failure is not None:
            spec, cause = failure
            error = ExperimentRunError(spec.strategy, spec.seed, cause)
            report.complete = False
            report.failure = str(error)
            logger.error(
                "experiment_failed", strategy=spec.strategy, seed=spec.seed, error=str(cause)
            )
            if self.write_files:
                result.files = emit_reports(report, self.out_dir)
            raise error from cause

        if self.write_files:
            result.files = emit_reports(report, self.out_dir)
        result.completed_at = datetime.now()
        logger.info(
            "experiment_completed",
            runs=len(report.rows),
            duration=result.duration_seconds,
        )
        return result

    def _run_one(self, spec: RunSpec) -> RunRow:
        scenario = self.scenario
        if spec.scenario_index > 0:
            scenario = scenario.with_fault_scale(spec.rate_scale)
        with run_context(
            strategy=spec.strategy, seed=spec.seed, scenario_index=spec.scenario_index
        ):
            report: SimReport = run_simulation(
                scenario, spec.strategy, spec.seed, weights=self.weights
            )
        if self.write_files and self.write_event_logs:
            export_events(report.events, self.out_dir / "events" / spec.event_log_name)
        return RunRow.from_report(report, spec.scenario_index, spec.rate_scale)


def run_experiment(
    scenario: ScenarioConfig,
    out_dir: Path | None = None,
    strategies: Sequence[str] | None = None,
    seeds: Sequence[int] | None = None,
    weights: PredictorWeights | None = None,
    write_files: bool = True,
) -> ComparisonReport:
    """Convenience function to run the experiment synchronously.

    Args:
        scenario: Validated scenario.
        out_dir: Output directory for report files.
        strategies: Strategy subset; all enabled strategies by default.
        seeds: Seed subset; the scenario's seeds by default.
        weights: Pre-trained predictor weights.
        write_files: Write report files.

    Returns:
        ComparisonReport with one row per (scenario index, strategy, seed).
    """
    pipeline = ExperimentPipeline(
        scenario,
        out_dir=out_dir,
        strategies=strategies,
        seeds=seeds,
        weights=weights,
        write_files=write_files,
    )
    return asyncio.run(pipeline.run()).report
