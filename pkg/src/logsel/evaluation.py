"""Fault-detection verdicts and the all-features vs selected-features comparison."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .config import RunConfig
from .errors import DateOutOfRange, LogselError, MissingColumn, EmptyFile
from .ingest import Dataset, Robot
from .knn import AnomalyResult
from .pipeline import run_detection, run_selection
from .vectorize import Span, vectorize_events

LABEL_COLUMNS = ("machine", "robot", "fault_kind", "replacement_date")


@dataclass(frozen=True)
class FaultLabel:
    machine: str
    robot: Robot
    fault_kind: str
    replacement_date: date


@dataclass(frozen=True)
class EvalOutcome:
    machine: str
    detected: bool
    top_day: date
    replacement_date: date
    lead_days: int


def judge_detection(result: AnomalyResult, label: FaultLabel, window_days: int) -> EvalOutcome:
    """Detected iff the top-scoring day is on the replacement date or at most
    ``window_days`` before it."""
    if window_days < 0:
        raise ValueError("window_days must be >= 0")
    if not result.days[0] <= label.replacement_date <= result.days[-1]:
        raise DateOutOfRange(
            f"replacement date {label.replacement_date} outside "
            f"{result.days[0]}..{result.days[-1]}"
        )
    top = result.top_day
    lead = (label.replacement_date - top).days
    return EvalOutcome(label.machine, 0 <= lead <= window_days, top, label.replacement_date, lead)


def read_labels_csv(path: str | Path) -> list[FaultLabel]:
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyFile(f"{path}: labels file is empty")
        missing = [c for c in LABEL_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise MissingColumn(f"{path}: missing label columns {missing}")
        return [
            FaultLabel(
                machine=row["machine"].strip(),
                robot=Robot.parse(row["robot"]),
                fault_kind=row["fault_kind"].strip(),
                replacement_date=date.fromisoformat(row["replacement_date"].strip()),
            )
            for row in reader
        ]


def write_labels_csv(path: str | Path, labels: Iterable[FaultLabel]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(LABEL_COLUMNS)
        for lab in labels:
            w.writerow([lab.machine, lab.robot.value, lab.fault_kind, lab.replacement_date.isoformat()])


@dataclass(frozen=True)
class ArmResult:
    n_features: int
    detected: bool
    top_day: date
    lead_days: int


@dataclass(frozen=True)
class ComparisonRow:
    label: FaultLabel
    n_messages: int
    raw: ArmResult | None
    selected: ArmResult | None
    error: str | None = None


@dataclass(frozen=True)
class Comparison:
    rows: tuple[ComparisonRow, ...]
    window: int

    @property
    def raw_detected(self) -> int:
        return sum(1 for r in self.rows if r.raw is not None and r.raw.detected)

    @property
    def selected_detected(self) -> int:
        return sum(1 for r in self.rows if r.selected is not None and r.selected.detected)

    @property
    def total(self) -> int:
        return len(self.rows)


def machine_span(dataset: Dataset, machine: str) -> Span:
    days = [r.timestamp.date() for r in dataset.logs if r.machine == machine]
    days += [
        r.timestamp.date() for r in dataset.sensors if r.machine is None or r.machine == machine
    ]
    if not days:
        return dataset.span
    return (min(days), max(days))


def evaluate_machine(
    dataset: Dataset,
    label: FaultLabel,
    cfg: RunConfig,
    *,
    select: bool = True,
) -> ComparisonRow:
    """Run both arms for one labelled machine.

    Selection sees the machine's whole span (it does not look at labels);
    KNN scoring is restricted to the days up to and including the
    replacement date.
    """
    span = cfg.span or machine_span(dataset, label.machine)
    n_messages = sum(
        1
        for r in dataset.logs
        if r.machine == label.machine and span[0] <= r.timestamp.date() <= span[1]
    )
    try:
        if not span[0] <= label.replacement_date <= span[1]:
            raise DateOutOfRange(
                f"replacement date {label.replacement_date} outside {span[0]}..{span[1]}"
            )
        detect_span = (span[0], label.replacement_date)
        events = vectorize_events(dataset, label.machine, span)
        raw = _arm(events, None, detect_span, label, cfg)
        selected = None
        if select:
            run = run_selection(dataset, label.machine, label.robot, cfg, span)
            selected = _arm(run.events, run.final.selected, detect_span, label, cfg)
    except LogselError as exc:
        return ComparisonRow(label, n_messages, None, None, f"{exc.kind}: {exc}")
    return ComparisonRow(label, n_messages, raw, selected)


def _arm(events, codes, span, label, cfg) -> ArmResult:
    matrix, result = run_detection(events, codes, span, cfg.k)
    outcome = judge_detection(result, label, cfg.window)
    return ArmResult(len(matrix.codes), outcome.detected, outcome.top_day, outcome.lead_days)


def compare_pipelines(
    dataset: Dataset,
    labels: Sequence[FaultLabel],
    cfg: RunConfig | None = None,
    *,
    select: bool = True,
) -> Comparison:
    """One row per label; a failing machine is reported, not raised."""
    cfg = cfg or RunConfig()
    if not labels:
        raise ValueError("at least one labelled machine is required")
    rows = [evaluate_machine(dataset, lab, cfg, select=select) for lab in labels]
    return Comparison(tuple(rows), cfg.window)


_HEADER = (
    "machine",
    "robot",
    "fault",
    "replacement",
    "messages",
    "raw_features",
    "raw_detected",
    "raw_top_day",
    "selected_features",
    "selected_detected",
    "selected_top_day",
    "status",
)


def _yes_no(arm: ArmResult | None) -> str:
    if arm is None:
        return ""
    return "Yes" if arm.detected else "No"


def comparison_rows(cmp: Comparison) -> list[list[str]]:
    out = []
    for r in cmp.rows:
        out.append(
            [
                r.label.machine,
                r.label.robot.value,
                r.label.fault_kind,
                r.label.replacement_date.isoformat(),
                str(r.n_messages),
                "" if r.raw is None else str(r.raw.n_features),
                _yes_no(r.raw),
                "" if r.raw is None else r.raw.top_day.isoformat(),
                "" if r.selected is None else str(r.selected.n_features),
                _yes_no(r.selected),
                "" if r.selected is None else r.selected.top_day.isoformat(),
                "ok" if r.error is None else f"Error ({r.error.split(':', 1)[0]})",
            ]
        )
    return out


def write_comparison_csv(path: str | Path, cmp: Comparison) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_HEADER)
        w.writerows(comparison_rows(cmp))


def render_comparison(cmp: Comparison) -> str:
    """Aligned plain-text table with a detected-out-of-total footer."""
    body = comparison_rows(cmp)
    widths = [max(len(h), *(len(row[i]) for row in body)) for i, h in enumerate(_HEADER)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(_HEADER, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    lines.append("")
    lines.append(f"window: {cmp.window} days")
    lines.append(f"detected with all features:      {cmp.raw_detected}/{cmp.total}")
    lines.append(f"detected with selected features: {cmp.selected_detected}/{cmp.total}")
    return "\n".join(lines) + "\n"


def labels_by_machine(labels: Sequence[FaultLabel]) -> Mapping[str, FaultLabel]:
    return {lab.machine: lab for lab in labels}
