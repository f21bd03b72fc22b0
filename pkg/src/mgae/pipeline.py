"""End-to-end orchestration: panel -> graphs -> training -> detection -> tests.

`run_pipeline` is pure computation and returns an AnomalyReport;
`export_outputs` writes the report, delimited outputs, DOT graphs, and
rendered figures into the output directory.  A failure in any period aborts
the whole run (cross-period tests over partial period sets would mislead).
"""

from __future__ import annotations

import csv
import json
import re
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .anomaly import AnomalySet, score_distribution, sweep_q
from .autoencoder import TrainTrace, init_model, reconstruction_errors, train
from .config import PipelineConfig
from .corrnet import (
    MarketGraph,
    build_thresholded_graph,
    correlation_matrix,
    mst_reduce,
    percentile_threshold,
    to_dot,
)
from .errors import MgaeError
from .graphstats import GraphSummary, degree_count_rows, degree_rank_rows, summarize
from .ingest import PeriodSpec, ReturnsMatrix, clean_panel, load_returns_csv, split_periods
from .stats import TTestResult, compare_periods


@dataclass(frozen=True)
class PeriodResult:
    """Everything computed for one analysis period."""

    spec: PeriodSpec
    observations: int
    tau: float
    thresholded: MarketGraph
    graph: MarketGraph  # analysis graph: MST forest when enabled, else thresholded
    summary_thresholded: GraphSummary
    summary_analysis: GraphSummary
    trace: TrainTrace
    reconstruction: np.ndarray = field(repr=False)
    sweeps: tuple[tuple[float, AnomalySet], ...]

    def sweep_counts(self) -> list[tuple[float, int]]:
        return [(q, len(s.anomalies)) for q, s in self.sweeps]


@dataclass(frozen=True)
class AnomalyReport:
    """Aggregate result of one pipeline run."""

    version: str
    generated_at: str
    config: PipelineConfig
    periods: tuple[PeriodResult, ...]
    ttests: tuple[TTestResult, ...]


@contextmanager
def _stage(period: str, name: str):
    """Tag pipeline errors with the failing stage and period."""
    try:
        yield
    except MgaeError as exc:
        raise type(exc)(f"{name} failed for period {period!r}: {exc}") from exc


def _run_period(spec: PeriodSpec, sub: ReturnsMatrix, config: PipelineConfig) -> PeriodResult:
    with _stage(spec.name, "corrnet"):
        corr = correlation_matrix(sub)
        tau = percentile_threshold(corr, config.percentile)
        thresholded = build_thresholded_graph(corr, tau)
        graph = mst_reduce(thresholded) if config.mst else thresholded

    with _stage(spec.name, "autoencoder"):
        rows = graph.adjacency_matrix()
        model = init_model(graph.k, config.train)
        trained, trace = train(model, rows, config.train)
        errors = reconstruction_errors(trained, rows)

    with _stage(spec.name, "anomaly"):
        sweeps = sweep_q(
            errors, node_ids=graph.assets, q_grid=config.q_grid, c=config.detection_c
        )

    return PeriodResult(
        spec=spec,
        observations=sub.n_obs,
        tau=tau,
        thresholded=thresholded,
        graph=graph,
        summary_thresholded=summarize(thresholded),
        summary_analysis=summarize(graph),
        trace=trace,
        reconstruction=errors,
        sweeps=tuple(sweeps),
    )


def run_pipeline(config: PipelineConfig) -> AnomalyReport:
    """Execute ingest -> graphs -> training -> q-sweep -> cross-period tests."""
    panel = clean_panel(load_returns_csv(config.input_path))
    splits = split_periods(panel, list(config.periods))
    results = [_run_period(spec, sub, config) for spec, sub in splits]
    counts = {r.spec.name: [float(n) for _, n in r.sweep_counts()] for r in results}
    ttests = compare_periods(counts)
    return AnomalyReport(
        version=__version__,
        generated_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        config=config,
        periods=tuple(results),
        ttests=tuple(ttests),
    )


def _summary_dict(s: GraphSummary) -> dict:
    return {
        "node_count": s.node_count,
        "edge_count": s.edge_count,
        "isolated_fraction": s.isolated_fraction,
        "max_degree": s.max_degree,
        "mean_degree": s.mean_degree,
        "std_degree": s.std_degree,
        "clustering_coeff": s.clustering_coeff,
    }


def _config_dict(config: PipelineConfig) -> dict:
    return {
        "input": str(config.input_path),
        "out_dir": str(config.out_dir),
        "percentile": config.percentile,
        "mst": config.mst,
        "detection_c": config.detection_c,
        "q_grid": list(config.q_grid),
        "autoencoder": {
            "epochs": config.train.epochs,
            "learning_rate": config.train.learning_rate,
            "seed": config.train.seed,
            "hidden_dim": config.train.hidden_dim,
            "bottleneck_dim": config.train.bottleneck_dim,
        },
        "periods": [
            {"name": p.name, "start": p.start, "end": p.end} for p in config.periods
        ],
    }


def report_dict(report: AnomalyReport) -> dict:
    """JSON-ready view of a report; `generated_at` is the only volatile field."""
    return {
        "tool": "mgae",
        "version": report.version,
        "generated_at": report.generated_at,
        "config": _config_dict(report.config),
        "periods": [
            {
                "name": r.spec.name,
                "start": r.spec.start,
                "end": r.spec.end,
                "observations": r.observations,
                "tau": r.tau,
                "mst_applied": report.config.mst,
                "summary_thresholded": _summary_dict(r.summary_thresholded),
                "summary_analysis": _summary_dict(r.summary_analysis),
                "training_loss": list(r.trace.losses),
                "reconstruction_errors": {
                    asset: float(e) for asset, e in zip(r.graph.assets, r.reconstruction)
                },
                "sweeps": [
                    {
                        "q": q,
                        "threshold": s.threshold,
                        "anomaly_count": len(s.anomalies),
                        "anomalies": {
                            node: float(s.scores[r.graph.assets.index(node)])
                            for node in s.anomalies
                        },
                    }
                    for q, s in r.sweeps
                ],
            }
            for r in report.periods
        ],
        "ttests": [
            {
                "pair": list(t.pair),
                "t_statistic": t.t_statistic,
                "degrees_of_freedom": t.degrees_of_freedom,
                "p_value": t.p_value,
            }
            for t in report.ttests
        ],
    }


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_-]+", "_", name)


def export_outputs(report: AnomalyReport, out_dir: str | Path) -> list[Path]:
    """Write all artifacts; on failure, remove whatever was already written."""
    out = Path(out_dir)
    written: list[Path] = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        fig_dir = out / "figures"
        fig_dir.mkdir(exist_ok=True)

        path = out / "report.json"
        path.write_text(json.dumps(report_dict(report), indent=2) + "\n", encoding="utf-8")
        written.append(path)

        for r in report.periods:
            slug = _slug(r.spec.name)

            path = out / f"graph_{slug}.dot"
            path.write_text(to_dot(r.graph), encoding="utf-8")
            written.append(path)

            path = out / f"degrees_{slug}.csv"
            with path.open("w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["rank", "degree"])
                writer.writerows(degree_rank_rows(r.graph))
            written.append(path)

            path = out / f"trace_{slug}.csv"
            with path.open("w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["epoch", "loss"])
                for epoch, loss in enumerate(r.trace.losses):
                    writer.writerow([epoch, repr(loss)])
            written.append(path)

        path = out / "anomalies.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["period", "q", "node_id", "score", "threshold", "flagged"])
            for r in report.periods:
                assets = r.graph.assets
                for q, s in r.sweeps:
                    for node in s.anomalies:
                        score = float(s.scores[assets.index(node)])
                        writer.writerow([r.spec.name, q, node, repr(score), repr(s.threshold), 1])
        written.append(path)

        path = out / "sweep.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["period", "q", "anomaly_count"])
            for r in report.periods:
                for q, n in r.sweep_counts():
                    writer.writerow([r.spec.name, q, n])
        written.append(path)

        path = out / "ttests.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["pair", "t_statistic", "df", "p_value"])
            for t in report.ttests:
                writer.writerow(
                    [f"{t.pair[0]} vs {t.pair[1]}", repr(t.t_statistic),
                     repr(t.degrees_of_freedom), repr(t.p_value)]
                )
        written.append(path)

        # figures are rendered last so the delimited outputs exist even if
        # the plotting backend misbehaves (cleanup then removes everything)
        from . import figures

        for r in report.periods:
            slug = _slug(r.spec.name)
            written.append(
                figures.render_degree_figure(
                    degree_rank_rows(r.graph),
                    degree_count_rows(r.graph),
                    r.spec.name,
                    fig_dir / f"fig_degrees_{slug}.png",
                )
            )
            written.append(
                figures.render_trace_figure(
                    r.trace.losses, r.spec.name, fig_dir / f"fig_trace_{slug}.png"
                )
            )
        written.append(
            figures.render_sweep_figure(
                {r.spec.name: r.sweep_counts() for r in report.periods},
                fig_dir / "fig_sweep.png",
            )
        )
    except BaseException:
        for path in written:
            try:
                path.unlink()
            except OSError:
                pass
        raise
    return written
