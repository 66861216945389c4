"""CLI entry point for the fault-tolerance simulator."""

import asyncio
import functools
import json
import sys
from collections.abc import Callable
from pathlib import Path

import click
from rich.console import Console
from rich.panel import Panel
from rich.progress import BarColumn, Progress, SpinnerColumn, TaskProgressColumn, TextColumn
from rich.table import Table

from config.settings import settings
from src.errors import ConfigurationError, FaultSimError
from src.models.scenario import STRATEGY_ORDER, ScenarioConfig
from src.pipeline.orchestrator import ExperimentPipeline, ExperimentResult
from src.pipeline.scenario import parse_scenario
from src.predictor.codec import dump_weights
from src.predictor.trainer import train_for_scenario
from src.telemetry.codec import dump_trace
from src.telemetry.generator import generate_trace
from src.utils.logger import setup_logging

console = Console()


def _handle_errors(command: Callable) -> Callable:
    """Turn simulator and I/O errors into exit code 1 and one JSON line on stderr."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (FaultSimError, OSError) as e:
            click.echo(json.dumps({"error": type(e).__name__, "message": str(e)}), err=True)
            sys.exit(1)

    return wrapper


def _setup(quiet: bool) -> None:
    setup_logging("WARNING" if quiet else None)


def _load(scenario_path: str | None) -> ScenarioConfig:
    return parse_scenario(Path(scenario_path) if scenario_path else settings.default_scenario)


def _resolve_seeds(scenario: ScenarioConfig, seed: int | None, count: int | None) -> list[int]:
    if seed is not None:
        seeds = [seed]
    elif count is not None:
        if count < 1 or count > len(scenario.seeds):
            raise ConfigurationError(
                f"--seeds {count} must lie in [1, {len(scenario.seeds)}] for this scenario"
            )
        seeds = scenario.seeds[:count]
    else:
        seeds = list(scenario.seeds)
    overlap = set(seeds) & set(scenario.predictor.training_seeds)
    if overlap:
        raise ConfigurationError(f"evaluation seeds overlap training seeds: {sorted(overlap)}")
    return seeds


scenario_option = click.option(
    "--scenario",
    "scenario_path",
    default=None,
    type=click.Path(),
    help=f"Scenario YAML file (default: {settings.default_scenario.name})",
)
seed_option = click.option("--seed", default=None, type=int, help="Run a single evaluation seed")
seeds_option = click.option(
    "--seeds",
    "seed_count",
    default=None,
    type=int,
    help="Run the first N evaluation seeds of the scenario",
)
out_option = click.option(
    "--out", "-o",
    "out_dir",
    default=None,
    type=click.Path(),
    help="Output directory (default: the scenario's, then settings.output_dir)",
)
quiet_option = click.option("--quiet", "-q", is_flag=True, help="Only print errors")


@click.group()
@click.version_option(version="0.1.0", prog_name="ftsim")
def cli():
    """Adaptive fault-tolerance simulator.

    Simulate a cluster under injected faults and compare checkpointing,
    replication, migration, predictive and adaptive fault-tolerance
    strategies on identical traces.
    """
    pass


@cli.command()
@scenario_option
@click.option(
    "--strategy", "-s",
    default="Adaptive",
    type=click.Choice(STRATEGY_ORDER),
    help="Strategy to simulate (default: Adaptive)",
)
@seed_option
@seeds_option
@out_option
@click.option("--events/--no-events", default=True, help="Export per-run event logs")
@quiet_option
@_handle_errors
def run(
    scenario_path: str | None,
    strategy: str,
    seed: int | None,
    seed_count: int | None,
    out_dir: str | None,
    events: bool,
    quiet: bool,
):
    """Simulate one strategy over the scenario's evaluation seeds.

    Example:
        ftsim run --strategy CP --seed 0
        ftsim run --scenario config/scenarios/single_fault.yaml --strategy CP
    """
    _setup(quiet)
    scenario = _load(scenario_path)
    seeds = _resolve_seeds(scenario, seed, seed_count)
    result = _run_pipeline(scenario, [strategy], seeds, out_dir, events, quiet)
    if not quiet:
        _display_results(result)


@cli.command()
@scenario_option
@seed_option
@seeds_option
@out_option
@click.option("--events/--no-events", default=None, help="Export per-run event logs")
@quiet_option
@_handle_errors
def compare(
    scenario_path: str | None,
    seed: int | None,
    seed_count: int | None,
    out_dir: str | None,
    events: bool | None,
    quiet: bool,
):
    """Run every enabled strategy on the same traces and write the comparison.

    Example:
        ftsim compare --scenario config/scenarios/comparison_protocol.yaml
        ftsim compare --seeds 3 --out output/quick
    """
    _setup(quiet)
    scenario = _load(scenario_path)
    seeds = _resolve_seeds(scenario, seed, seed_count)
    result = _run_pipeline(scenario, None, seeds, out_dir, events, quiet)
    if not quiet:
        _display_results(result)


def _run_pipeline(
    scenario: ScenarioConfig,
    strategies: list[str] | None,
    seeds: list[int],
    out_dir: str | None,
    events: bool | None,
    quiet: bool,
) -> ExperimentResult:
    if not quiet:
        console.print(Panel.fit(
            f"[bold blue]Fault-Tolerance Simulator[/bold blue]\n\n"
            f"Scenario: [green]{scenario.name}[/green]\n"
            f"Strategies: {', '.join(strategies or scenario.strategies.enabled)}\n"
            f"Seeds: {', '.join(str(s) for s in seeds)}\n"
            f"Nodes: {scenario.node_count}  Horizon: {scenario.horizon} ticks\n"
            f"Fault sweep: {scenario.experiment.fault_sweep or 'none'}",
            title="Configuration",
        ))

    if quiet:
        pipeline = ExperimentPipeline(
            scenario,
            out_dir=Path(out_dir) if out_dir else None,
            strategies=strategies,
            seeds=seeds,
            write_event_logs=events,
        )
        return asyncio.run(pipeline.run())

    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        console=console,
    ) as progress:
        task = progress.add_task("[cyan]Starting...", total=None)

        def progress_callback(step: str, current: int, total: int):
            progress.update(task, description=f"[cyan]{step}", completed=current, total=total)

        pipeline = ExperimentPipeline(
            scenario,
            out_dir=Path(out_dir) if out_dir else None,
            strategies=strategies,
            seeds=seeds,
            write_event_logs=events,
            progress_callback=progress_callback,
        )
        return asyncio.run(pipeline.run())


def _display_results(result: ExperimentResult):
    """Display per-strategy aggregates and the written files."""
    report = result.report
    console.print()

    for index, scale in enumerate(report.rate_scales):
        title = "Comparison" if index == 0 else f"Fault sweep {index} (rate x{scale:g})"
        table = Table(title=title, show_header=True, header_style="bold magenta")
        table.add_column("Strategy", style="cyan")
        table.add_column("Faults")
        table.add_column("Recovery (mean)")
        table.add_column("Downtime")
        table.add_column("Overhead")
        table.add_column("Accuracy")

        for (row_index, strategy), metrics in report.aggregates().items():
            if row_index != index:
                continue
            table.add_row(
                strategy,
                f"{metrics['fault_count'].mean:.1f}",
                f"{metrics['mean_recovery_time'].mean:.2f}",
                f"{metrics['total_downtime'].mean:.1f} ± {metrics['total_downtime'].std:.1f}",
                f"{metrics['overhead_cost'].mean:.0f}",
                f"{metrics['accuracy'].mean:.3f}",
            )
        console.print(table)

    if result.duration_seconds:
        console.print(f"Duration: {result.duration_seconds:.1f}s")

    console.print()
    for path in result.files:
        console.print(f"[green]{path.name}:[/green] {path}")

    console.print("\n[bold green]Done![/bold green]")


@cli.command()
@scenario_option
@out_option
@quiet_option
@_handle_errors
def train(scenario_path: str | None, out_dir: str | None, quiet: bool):
    """Train the fault predictor on the scenario's training seeds.

    Writes predictor.txt into the output directory.
    """
    _setup(quiet)
    scenario = _load(scenario_path)
    target = Path(out_dir or scenario.experiment.output_dir or settings.output_dir)

    if quiet:
        training = train_for_scenario(scenario)
    else:
        with console.status("[cyan]Training predictor..."):
            training = train_for_scenario(scenario)
    path = dump_weights(training.weights, target / "predictor.txt")

    if not quiet:
        table = Table(title="Predictor", show_header=True, header_style="bold magenta")
        table.add_column("Metric", style="cyan")
        table.add_column("Value", style="green")
        table.add_row("Training seeds", ", ".join(map(str, scenario.predictor.training_seeds)))
        table.add_row("Layers", " -> ".join(map(str, training.weights.layer_sizes)))
        table.add_row("Epochs", str(len(training.loss_history)))
        table.add_row("Final loss", f"{training.final_loss:.6f}")
        table.add_row("Weights", str(path))
        console.print(table)


@cli.command("gen-trace")
@scenario_option
@click.option("--seed", default=None, type=int, help="Trace seed (default: first evaluation seed)")
@out_option
@quiet_option
@_handle_errors
def gen_trace(scenario_path: str | None, seed: int | None, out_dir: str | None, quiet: bool):
    """Generate the telemetry trace of one seed and write it as text."""
    _setup(quiet)
    scenario = _load(scenario_path)
    seed = scenario.seeds[0] if seed is None else seed
    target = Path(out_dir or scenario.experiment.output_dir or settings.output_dir)

    trace = generate_trace(scenario, seed)
    path = dump_trace(trace, target / f"trace_seed{seed}.txt")

    if not quiet:
        console.print(
            f"[green]Trace:[/green] {path} "
            f"({trace.horizon} ticks, {trace.node_count} nodes, "
            f"{len(trace.fault_schedule)} faults)"
        )


@cli.command("show-config")
def show_config():
    """Show current process settings."""
    table = Table(title="Current Configuration", show_header=True)
    table.add_column("Setting", style="cyan")
    table.add_column("Value", style="green")

    for key, value in settings.model_dump().items():
        table.add_row(key, str(value))

    console.print(table)


if __name__ == "__main__":
    cli()
