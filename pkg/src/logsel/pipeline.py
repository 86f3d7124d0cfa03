"""End-to-end glue: dataset -> selected features -> daily anomaly scores."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .config import RunConfig
from .countmatrix import EventCountMatrix, build_count_matrix
from .detectors import ScoreSeries, sensor_daily_scores
from .ingest import Dataset, Robot
from .knn import AnomalyResult, knn_scores
from .redundancy import PruneDecision, prune_redundant
from .relevance import RelevanceReport, SelectionResult, score_relevance, select_top_fraction
from .vectorize import EventSeries, Span, group_sensors, vectorize_events


@dataclass
class SelectionRun:
    events: list[EventSeries]
    sensor_scores: list[ScoreSeries]
    report: RelevanceReport
    relevant: SelectionResult
    final: SelectionResult
    decisions: list[PruneDecision] = field(default_factory=list)


def select_features(
    events: Sequence[EventSeries],
    sensor_scores: Sequence[ScoreSeries],
    cfg: RunConfig,
) -> tuple[RelevanceReport, SelectionResult, SelectionResult, list[PruneDecision]]:
    """Relevance ranking, top-fraction cut, then redundancy pruning."""
    report = score_relevance(
        events,
        sensor_scores,
        variant=cfg.tau_variant,
        aggregate=cfg.aggregate,
        ddof=cfg.ddof,
    )
    relevant = select_top_fraction(report, cfg.fraction)
    decisions: list[PruneDecision] = []
    final = prune_redundant(
        relevant,
        events,
        cfg.target_count,
        cfg.rho,
        basis=cfg.redundancy_basis,
        variant=cfg.tau_variant,
        ddof=cfg.ddof,
        decisions=decisions,
    )
    return report, relevant, final, decisions


def run_selection(
    dataset: Dataset,
    machine: str,
    robot: Robot | str,
    cfg: RunConfig,
    span: Span | None = None,
) -> SelectionRun:
    span = span or cfg.span or dataset.span
    events = vectorize_events(dataset, machine, span)
    sensors = group_sensors(dataset, robot, machine)
    sensor_scores = sensor_daily_scores(sensors, span)
    report, relevant, final, decisions = select_features(events, sensor_scores, cfg)
    return SelectionRun(events, sensor_scores, report, relevant, final, decisions)


def run_detection(
    events: Sequence[EventSeries],
    codes: Sequence[str] | SelectionResult | None,
    span: Span,
    k: int,
) -> tuple[EventCountMatrix, AnomalyResult]:
    """KNN over the count matrix of ``codes`` (all codes when None)."""
    if codes is None:
        codes = [e.code for e in events]
    matrix = build_count_matrix(events, codes, span)
    return matrix, knn_scores(matrix, k)
