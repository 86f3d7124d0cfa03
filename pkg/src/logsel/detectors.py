"""Univariate anomaly scorers and the daily alignment of irregular scores.

Sensor series are scored by persistence checking (absolute change from the
previous sample); daily count series by a robust deviation score,
``|x - median| / std``.  Persistence scores are irregular in time, so they
are collapsed to one value per day (maximum, zero when the day has no
sample) before being compared with count-series scores.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

import numpy as np

from .errors import TooShort, UsageError
from .vectorize import EventSeries, SensorSeries, Span, day_range, n_days


@dataclass(frozen=True, eq=False)
class RawScoreSeries:
    timestamps: tuple[datetime, ...]
    scores: np.ndarray


@dataclass(frozen=True, eq=False)
class ScoreSeries:
    span: Span
    scores: np.ndarray

    def __len__(self) -> int:
        return len(self.scores)


def persistence_score_values(values) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        raise TooShort(f"persistence scoring needs >= 2 samples, got {values.size}")
    out = np.empty_like(values)
    # the first sample has no predecessor; 0 keeps lengths aligned
    out[0] = 0.0
    out[1:] = np.abs(np.diff(values))
    return out


def persistence_scores(series: SensorSeries) -> RawScoreSeries:
    return RawScoreSeries(series.timestamps, persistence_score_values(series.values))


def robust_score_values(counts, ddof: int = 1) -> np.ndarray:
    """``|x - median(x)| / std(x)``; all zeros when the series is flat.

    ``ddof=1`` (sample std) by default, ``ddof=0`` for population std.
    """
    x = np.asarray(counts, dtype=float)
    if x.size < 2:
        raise TooShort(f"robust scoring needs >= 2 points, got {x.size}")
    if ddof not in (0, 1):
        raise UsageError(f"ddof must be 0 or 1, got {ddof}")
    std = x.std(ddof=ddof)
    if std == 0.0:
        return np.zeros_like(x)
    return np.abs(x - np.median(x)) / std


def robust_scores(series: EventSeries, ddof: int = 1) -> ScoreSeries:
    return ScoreSeries(series.span, robust_score_values(series.counts, ddof))


def align_daily_max(raw: RawScoreSeries, span: Span) -> ScoreSeries:
    size = n_days(span)
    out = np.zeros(size)
    first = span[0]
    for ts, score in zip(raw.timestamps, raw.scores):
        i = (ts.date() - first).days
        if 0 <= i < size and score > out[i]:
            out[i] = score
    return ScoreSeries(span, out)


def sensor_daily_scores(series: list[SensorSeries], span: Span) -> list[ScoreSeries]:
    """Persistence-score every position and align each onto ``span``."""
    return [align_daily_max(persistence_scores(s), span) for s in series]


def write_score_series_csv(path: str | Path, columns: dict[str, ScoreSeries]) -> None:
    names = list(columns)
    spans = {columns[n].span for n in names}
    if len(spans) != 1:
        raise UsageError("score series must share a span to be exported together")
    (span,) = spans
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["day", *names])
        for i, day in enumerate(day_range(span)):
            w.writerow([day.isoformat(), *(repr(float(columns[n].scores[i])) for n in names)])
