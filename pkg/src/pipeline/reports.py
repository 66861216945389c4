"""Comparison report model and its CSV / JSON files."""

import csv
import json
from collections.abc import Iterable
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from src.models.scenario import STRATEGY_ORDER
from src.models.simulation import SimReport
from src.utils.logger import get_logger

logger = get_logger("reports")

REPORT_FORMAT_VERSION = 1
FORMAT_HEADER = f"# format_version: {REPORT_FORMAT_VERSION}\n"

RUN_FIELDS: tuple[str, ...] = (
    "scenario_index",
    "rate_scale",
    "strategy",
    "seed",
    "fault_count",
    "affecting_faults",
    "censored_faults",
    "mean_recovery_time",
    "max_recovery_time",
    "total_downtime",
    "overhead_cost",
    "tp",
    "fp",
    "tn",
    "fn",
    "accuracy",
)
# Metrics aggregated over seeds
AGGREGATE_METRICS: tuple[str, ...] = (
    "fault_count",
    "mean_recovery_time",
    "total_downtime",
    "overhead_cost",
    "accuracy",
)


@dataclass(frozen=True)
class RunRow:
    """Flat metrics of one (scenario index, strategy, seed) run."""

    scenario_index: int
    rate_scale: float
    strategy: str
    seed: int
    fault_count: int
    affecting_faults: int
    censored_faults: int
    mean_recovery_time: float
    max_recovery_time: int
    total_downtime: int
    overhead_cost: int
    tp: int
    fp: int
    tn: int
    fn: int
    accuracy: float

    @classmethod
    def from_report(
        cls,
        report: SimReport,
        scenario_index: int = 0,
        rate_scale: float = 1.0,
    ) -> "RunRow":
        metrics = report.metrics
        confusion = metrics.confusion
        return cls(
            scenario_index=scenario_index,
            rate_scale=rate_scale,
            strategy=report.strategy,
            seed=report.seed,
            fault_count=metrics.fault_count,
            affecting_faults=len(metrics.recovery_times),
            censored_faults=len(metrics.censored_faults),
            mean_recovery_time=metrics.mean_recovery_time,
            max_recovery_time=metrics.max_recovery_time,
            total_downtime=metrics.total_downtime,
            overhead_cost=metrics.overhead_cost,
            tp=confusion.tp,
            fp=confusion.fp,
            tn=confusion.tn,
            fn=confusion.fn,
            accuracy=confusion.accuracy,
        )

    def sort_key(self) -> tuple[int, int, int]:
        return (self.scenario_index, _strategy_rank(self.strategy), self.seed)


def _strategy_rank(name: str) -> int:
    return STRATEGY_ORDER.index(name) if name in STRATEGY_ORDER else len(STRATEGY_ORDER)


@dataclass(frozen=True)
class Aggregate:
    mean: float
    std: float


def aggregate(values: Iterable[float]) -> Aggregate:
    """Mean and population standard deviation."""
    data = np.asarray(list(values), dtype=np.float64)
    if data.size == 0:
        return Aggregate(0.0, 0.0)
    return Aggregate(float(np.mean(data)), float(np.std(data)))


@dataclass
class ComparisonReport:
    """All per-run rows of an experiment; aggregates are always recomputed from them."""

    scenario_name: str
    strategies: list[str]
    rows: list[RunRow] = field(default_factory=list)
    rate_scales: list[float] = field(default_factory=lambda: [1.0])
    complete: bool = True
    failure: str | None = None

    def sorted_rows(self) -> list[RunRow]:
        return sorted(self.rows, key=RunRow.sort_key)

    def scenario_indices(self) -> list[int]:
        return sorted({row.scenario_index for row in self.rows})

    def rows_for(self, scenario_index: int, strategy: str) -> list[RunRow]:
        return [
            r for r in self.sorted_rows()
            if r.scenario_index == scenario_index and r.strategy == strategy
        ]

    def aggregates(self) -> dict[tuple[int, str], dict[str, Aggregate]]:
        result = {}
        for index in self.scenario_indices():
            for strategy in self.strategies:
                rows = self.rows_for(index, strategy)
                if rows:
                    result[(index, strategy)] = {
                        metric: aggregate(getattr(r, metric) for r in rows)
                        for metric in AGGREGATE_METRICS
                    }
        return result

    def cost_row(self) -> dict[str, float]:
        """Mean overhead per strategy on the base scenario."""
        return {
            strategy: aggregate(r.overhead_cost for r in self.rows_for(0, strategy)).mean
            for strategy in self.strategies
            if self.rows_for(0, strategy)
        }

    def series(self, metric: str) -> list[dict[str, Any]]:
        """One point per scenario index: mean fault count and the metric's mean per strategy."""
        points = []
        for index in self.scenario_indices():
            index_rows = [r for r in self.rows if r.scenario_index == index]
            point: dict[str, Any] = {
                "scenario_index": index,
                "fault_count": aggregate(r.fault_count for r in index_rows).mean,
            }
            for strategy in self.strategies:
                rows = self.rows_for(index, strategy)
                point[strategy] = aggregate(getattr(r, metric) for r in rows).mean if rows else None
            points.append(point)
        return points


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def _round(value: float) -> float:
    return float(f"{value:.6f}")


def _write_table(path: Path, header: list[str], rows: Iterable[dict[str, Any]]) -> Path:
    with path.open("w", encoding="utf-8", newline="") as f:
        f.write(FORMAT_HEADER)
        writer = csv.DictWriter(f, fieldnames=header, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _fmt(row.get(key)) for key in header})
    return path


def summary_document(report: ComparisonReport) -> dict[str, Any]:
    aggregates = [
        {
            "scenario_index": index,
            "strategy": strategy,
            "runs": len(report.rows_for(index, strategy)),
            "metrics": {
                name: {"mean": _round(agg.mean), "std": _round(agg.std)}
                for name, agg in metrics.items()
            },
        }
        for (index, strategy), metrics in report.aggregates().items()
    ]
    return {
        "format_version": REPORT_FORMAT_VERSION,
        "scenario": report.scenario_name,
        "complete": report.complete,
        "failure": report.failure,
        "strategies": report.strategies,
        "rate_scales": report.rate_scales,
        "run_count": len(report.rows),
        "aggregates": aggregates,
        "table1_cost": {k: _round(v) for k, v in report.cost_row().items()},
    }


def emit_reports(report: ComparisonReport, out_dir: Path) -> list[Path]:
    """Write the report files into ``out_dir``; identical reports give identical bytes.

    Args:
        report: Comparison report, complete or partial.
        out_dir: Output directory, created when missing.

    Returns:
        Paths written: runs.csv, summary.json, table1_cost.csv,
        fig1_recovery.csv and fig2_accuracy.csv.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [
        _write_table(
            out_dir / "runs.csv",
            list(RUN_FIELDS),
            (asdict(row) for row in report.sorted_rows()),
        )
    ]

    summary = out_dir / "summary.json"
    summary.write_text(
        json.dumps(summary_document(report), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
        newline="\n",
    )
    written.append(summary)

    cost = report.cost_row()
    cost_rows = [{"Methods": "Computation cost", **cost}] if cost else []
    written.append(
        _write_table(out_dir / "table1_cost.csv", ["Methods", *report.strategies], cost_rows)
    )

    series_header = ["scenario_index", "fault_count", *report.strategies]
    written.append(
        _write_table(
            out_dir / "fig1_recovery.csv", series_header, report.series("mean_recovery_time")
        )
    )
    written.append(
        _write_table(out_dir / "fig2_accuracy.csv", series_header, report.series("accuracy"))
    )
    logger.info(
        "reports_written",
        out_dir=str(out_dir),
        runs=len(report.rows),
        complete=report.complete,
    )
    return written
