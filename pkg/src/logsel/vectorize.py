"""Daily event-count series and per-position sensor series."""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from datetime import date, datetime, timedelta
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import NoRecordsForMachine, NoSensorData, UsageError
from .ingest import Dataset, Robot

Span = tuple[date, date]


def n_days(span: Span) -> int:
    first, last = span
    if last < first:
        raise UsageError(f"empty span {first}..{last}")
    return (last - first).days + 1


def day_range(span: Span) -> list[date]:
    return [span[0] + timedelta(days=i) for i in range(n_days(span))]


@dataclass(frozen=True, eq=False)
class EventSeries:
    """Dense daily trigger counts of one event code on one machine.

    ``counts[i]`` is the number of triggers on ``span[0] + i`` days.
    """

    machine: str
    code: str
    span: Span
    counts: np.ndarray

    @property
    def days(self) -> list[date]:
        return day_range(self.span)

    def pairs(self) -> list[tuple[date, int]]:
        return list(zip(self.days, self.counts.tolist()))


@dataclass(frozen=True, eq=False)
class SensorSeries:
    robot: Robot
    position: int
    timestamps: tuple[datetime, ...]
    values: np.ndarray
    machine: str | None = None

    def __len__(self) -> int:
        return len(self.timestamps)


def vectorize_events(
    dataset: Dataset,
    machine: str,
    span: Span | None = None,
) -> list[EventSeries]:
    """Count daily triggers per code for ``machine`` over ``span``.

    Only codes with at least one trigger inside the span are emitted.  The
    result is sorted by code.
    """
    span = span or dataset.span
    first = span[0]
    size = n_days(span)
    seen_machine = False
    buckets: dict[str, np.ndarray] = {}
    for rec in dataset.logs:
        if rec.machine != machine:
            continue
        seen_machine = True
        offset = (rec.timestamp.date() - first).days
        if 0 <= offset < size:
            arr = buckets.get(rec.code)
            if arr is None:
                arr = buckets[rec.code] = np.zeros(size, dtype=np.int64)
            arr[offset] += 1
    if not seen_machine:
        raise NoRecordsForMachine(f"no log records for machine {machine!r}")
    return [EventSeries(machine, code, span, buckets[code]) for code in sorted(buckets)]


def group_sensors(
    dataset: Dataset,
    robot: Robot | str,
    machine: str | None = None,
) -> list[SensorSeries]:
    """Split sensor records of ``robot`` into one series per position.

    Series are sorted by position, samples by timestamp (stable, so samples
    sharing a second keep their input order).  When ``machine`` is given and
    records carry a machine tag, only that machine's records are used;
    untagged records are assumed to belong to whichever machine is asked for.
    """
    robot = Robot.parse(robot) if isinstance(robot, str) else robot
    grouped: dict[int, list[tuple[datetime, float]]] = defaultdict(list)
    for rec in dataset.sensors:
        if rec.robot is not robot:
            continue
        if machine is not None and rec.machine is not None and rec.machine != machine:
            continue
        grouped[rec.position].append((rec.timestamp, rec.value))
    if not grouped:
        where = f" on machine {machine!r}" if machine is not None else ""
        raise NoSensorData(f"no sensor records for robot {robot.value}{where}")
    out = []
    for pos in sorted(grouped):
        samples = sorted(grouped[pos], key=lambda s: s[0])
        out.append(
            SensorSeries(
                robot=robot,
                position=pos,
                timestamps=tuple(s[0] for s in samples),
                values=np.array([s[1] for s in samples], dtype=float),
                machine=machine,
            )
        )
    return out


def write_event_series_csv(path: str | Path, series: Iterable[EventSeries]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["machine", "code", "day", "count"])
        for s in series:
            for day, count in s.pairs():
                w.writerow([s.machine, s.code, day.isoformat(), count])


def read_event_series_csv(path: str | Path) -> list[EventSeries]:
    rows: dict[tuple[str, str], list[tuple[date, int]]] = defaultdict(list)
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            rows[(row["machine"], row["code"])].append(
                (date.fromisoformat(row["day"]), int(row["count"]))
            )
    out = []
    for (machine, code), pairs in sorted(rows.items()):
        pairs.sort()
        span = (pairs[0][0], pairs[-1][0])
        counts = np.zeros(n_days(span), dtype=np.int64)
        for day, count in pairs:
            counts[(day - span[0]).days] = count
        out.append(EventSeries(machine, code, span, counts))
    return out


def common_span(series: Sequence[EventSeries]) -> Span | None:
    spans = {s.span for s in series}
    return spans.pop() if len(spans) == 1 else None
