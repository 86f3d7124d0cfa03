"""Ranking event codes by rank correlation with sensor anomaly scores."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .detectors import ScoreSeries, robust_scores
from .errors import BadFraction, EmptyReport, SpanMismatch, TooShort, UsageError
from .vectorize import EventSeries

TAU_VARIANTS = ("b", "a")
AGGREGATIONS = ("max", "mean")


def pair_signs(x) -> np.ndarray:
    """Signs of ``x[j] - x[i]`` over all pairs ``i < j`` (int8, flattened)."""
    x = np.asarray(x, dtype=float)
    i, j = np.triu_indices(x.size, k=1)
    return np.sign(x[j] - x[i]).astype(np.int8)


def tau_from_signs(sx: np.ndarray, sy: np.ndarray, variant: str = "b") -> float:
    """Kendall's tau from precomputed pair signs.

    tau-b = S / sqrt(pairs untied in x * pairs untied in y), where S is
    concordant minus discordant pairs.  A series with no untied pair has no
    rank information and yields 0.
    """
    s = int(np.dot(sx.astype(np.int64), sy))
    if variant == "b":
        nx = int(np.count_nonzero(sx))
        ny = int(np.count_nonzero(sy))
        if nx == 0 or ny == 0:
            return 0.0
        return s / math.sqrt(nx * ny)
    if variant == "a":
        if not sx.any() or not sy.any():
            return 0.0
        return s / sx.size
    raise UsageError(f"unknown tau variant {variant!r}")


def kendall_tau(x, y, variant: str = "b") -> float:
    """Kendall rank correlation of two equal-length series.

    Accepts `ScoreSeries` (spans must match) or plain sequences.
    """
    if isinstance(x, ScoreSeries) and isinstance(y, ScoreSeries):
        if x.span != y.span:
            raise SpanMismatch(f"span {x.span} != {y.span}")
        x, y = x.scores, y.scores
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise SpanMismatch(f"length {x.size} != {y.size}")
    if x.size < 2:
        raise TooShort("kendall tau needs >= 2 points")
    return tau_from_signs(pair_signs(x), pair_signs(y), variant)


@dataclass(frozen=True)
class RelevanceEntry:
    code: str
    taus: tuple[float, ...]
    aggregate: float


@dataclass(frozen=True)
class RelevanceReport:
    entries: tuple[RelevanceEntry, ...]
    positions: tuple[str, ...] = ()

    @property
    def codes(self) -> list[str]:
        return [e.code for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class SelectionResult:
    selected: tuple[str, ...]
    threshold_used: float
    stage: str  # "relevance" or "redundancy"
    dropped: tuple[str, ...] = field(default=())


def rank_entries(entries) -> tuple[RelevanceEntry, ...]:
    return tuple(sorted(entries, key=lambda e: (-e.aggregate, e.code)))


def score_relevance(
    events: Sequence[EventSeries],
    sensor_scores: Sequence[ScoreSeries],
    *,
    variant: str = "b",
    aggregate: str = "max",
    ddof: int = 1,
    position_names: Sequence[str] | None = None,
) -> RelevanceReport:
    """Correlate each event's robust scores with every sensor score series."""
    if aggregate not in AGGREGATIONS:
        raise UsageError(f"unknown aggregation {aggregate!r}")
    if not sensor_scores:
        raise UsageError("at least one sensor score series is required")
    spans = {s.span for s in events} | {s.span for s in sensor_scores}
    if len(spans) > 1:
        raise SpanMismatch(f"event and sensor score spans differ: {sorted(spans)}")
    sensor_signs = [pair_signs(s.scores) for s in sensor_scores]
    entries = []
    for ev in events:
        ev_signs = pair_signs(robust_scores(ev, ddof).scores)
        taus = tuple(tau_from_signs(ev_signs, ss, variant) for ss in sensor_signs)
        agg = max(taus) if aggregate == "max" else float(np.mean(taus))
        entries.append(RelevanceEntry(ev.code, taus, agg))
    names = tuple(position_names) if position_names else tuple(
        f"tau_{k}" for k in range(1, len(sensor_scores) + 1)
    )
    return RelevanceReport(rank_entries(entries), names)


def select_top_fraction(report: RelevanceReport, fraction: float) -> SelectionResult:
    if not report.entries:
        raise EmptyReport("relevance report is empty")
    if not 0.0 < fraction <= 1.0:
        raise BadFraction(f"fraction must be in (0, 1], got {fraction}")
    n_keep = math.ceil(fraction * len(report.entries) - 1e-9)
    n_keep = max(1, n_keep)
    kept = report.entries[:n_keep]
    return SelectionResult(
        selected=tuple(e.code for e in kept),
        threshold_used=fraction,
        stage="relevance",
        dropped=tuple(e.code for e in report.entries[n_keep:]),
    )


def write_relevance_csv(path: str | Path, report: RelevanceReport) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["code", *report.positions, "aggregate"])
        for e in report.entries:
            w.writerow([e.code, *(repr(t) for t in e.taus), repr(e.aggregate)])


def relevance_to_json(report: RelevanceReport) -> dict:
    return {
        "positions": list(report.positions),
        "entries": [
            {"code": e.code, "taus": list(e.taus), "aggregate": e.aggregate}
            for e in report.entries
        ],
    }


def selection_to_json(sel: SelectionResult) -> dict:
    return {
        "stage": sel.stage,
        "threshold_used": sel.threshold_used,
        "selected": list(sel.selected),
        "dropped": list(sel.dropped),
    }


def selection_from_json(data: dict) -> SelectionResult:
    return SelectionResult(
        selected=tuple(data["selected"]),
        threshold_used=float(data["threshold_used"]),
        stage=data["stage"],
        dropped=tuple(data.get("dropped", ())),
    )


def write_json(path: str | Path, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
