"""Event count matrix: one row per day, one column per selected code."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import EmptySelection, SpanMismatch, UnknownCode
from .relevance import SelectionResult
from .vectorize import EventSeries, Span, day_range, n_days


@dataclass(frozen=True, eq=False)
class EventCountMatrix:
    days: tuple[date, ...]
    codes: tuple[str, ...]
    values: np.ndarray  # int64, shape (len(days), len(codes))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def build_count_matrix(
    events: Sequence[EventSeries],
    selection: SelectionResult | Sequence[str],
    span: Span,
) -> EventCountMatrix:
    """Stack the selected codes' daily counts restricted to ``span``.

    ``span`` must lie inside the events' common span; rows outside it are
    cut off.  A code absent from ``events`` raises `UnknownCode`.
    """
    codes = tuple(selection.selected if isinstance(selection, SelectionResult) else selection)
    if not codes:
        raise EmptySelection("empty selection")
    by_code = {e.code: e for e in events}
    unknown = [c for c in codes if c not in by_code]
    if unknown:
        raise UnknownCode(f"codes not among event series: {unknown[:5]}")
    size = n_days(span)
    values = np.zeros((size, len(codes)), dtype=np.int64)
    for j, code in enumerate(codes):
        ev = by_code[code]
        start = (span[0] - ev.span[0]).days
        if start < 0 or start + size > len(ev.counts):
            raise SpanMismatch(f"span {span} not covered by series span {ev.span} of {code}")
        values[:, j] = ev.counts[start : start + size]
    return EventCountMatrix(tuple(day_range(span)), codes, values)


def write_count_matrix_csv(path: str | Path, matrix: EventCountMatrix) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["day", *matrix.codes])
        for day, row in zip(matrix.days, matrix.values.tolist()):
            w.writerow([day.isoformat(), *row])
