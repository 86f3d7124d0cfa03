"""Reading the event-log and sensor tables from CSV into typed records.

Both tables are UTF-8, comma separated, with a header row.  Timestamps use
exactly ``YYYY-MM-DD HH:MM:SS`` and are kept as naive datetimes.
"""

from __future__ import annotations

import csv
import enum
import re
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .errors import (
    BadTimestamp,
    BadValue,
    DataError,
    EmptyDataset,
    EmptyFile,
    MissingColumn,
    PositionOutOfRange,
)

TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S"
_TIMESTAMP_RE = re.compile(r"^\d{4}-\d{2}-\d{2} \d{2}:\d{2}:\d{2}$")
_POSITION_RE = re.compile(r"^[Pp]_?(\d+)$")

DEFAULT_LOG_SCHEMA: dict[str, str] = {
    "machine": "Machine",
    "code": "Code",
    "severity": "Severity",
    "detail": "Detail",
    "timestamp": "DateTime",
}
DEFAULT_SENSOR_SCHEMA: dict[str, str] = {
    "robot": "Robot",
    "position": "Position",
    "value": "Value",
    "timestamp": "DateTime",
}
# Optional sensor column: lets one file carry a whole fleet.
SENSOR_MACHINE_COLUMN = "Machine"


class Severity(str, enum.Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"
    UNKNOWN = "Unknown"

    @classmethod
    def parse(cls, text: str) -> "Severity":
        for member in cls:
            if member.value.lower() == text.strip().lower():
                return member
        return cls.UNKNOWN


class Robot(str, enum.Enum):
    LOAD = "Load"
    UNLOAD = "Unload"

    @classmethod
    def parse(cls, text: str) -> "Robot":
        for member in cls:
            if member.value.lower() == text.strip().lower():
                return member
        raise ValueError(f"unknown robot {text!r}")


@dataclass(frozen=True)
class LogRecord:
    machine: str
    code: str
    severity: Severity
    detail: str
    timestamp: datetime

    @property
    def day(self) -> date:
        return self.timestamp.date()


@dataclass(frozen=True)
class SensorRecord:
    robot: Robot
    position: int
    value: float
    timestamp: datetime
    machine: str | None = None

    @property
    def day(self) -> date:
        return self.timestamp.date()


@dataclass(frozen=True)
class RowIssue:
    """A malformed data row.  ``row`` is 1-based and excludes the header."""

    row: int
    kind: str
    text: str


class ReadResult(NamedTuple):
    records: list
    issues: list[RowIssue]


@dataclass(frozen=True)
class Dataset:
    logs: tuple[LogRecord, ...]
    sensors: tuple[SensorRecord, ...]
    machines: frozenset[str]
    span: tuple[date, date]
    issues: tuple[RowIssue, ...] = field(default=(), compare=False)


def parse_timestamp(text: str) -> datetime:
    text = text.strip()
    if not _TIMESTAMP_RE.match(text):
        raise ValueError(f"timestamp {text!r} is not YYYY-MM-DD HH:MM:SS")
    # fromisoformat is much faster than strptime and the regex already pins the layout
    return datetime.fromisoformat(text)


def format_timestamp(ts: datetime) -> str:
    return ts.strftime(TIMESTAMP_FORMAT)


def parse_position(text: str) -> int:
    text = text.strip()
    m = _POSITION_RE.match(text)
    if m:
        return int(m.group(1))
    return int(text)


def _open_rows(path, required: Iterable[str]):
    fh = open(path, newline="", encoding="utf-8-sig")
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        fh.close()
        raise EmptyFile(f"{path}: file is empty (no header row)") from None
    header = [h.strip() for h in header]
    for name in required:
        if name not in header:
            fh.close()
            raise MissingColumn(f"{path}: missing column {name!r}")
    return header, reader, fh


def read_log_csv(
    path: str | Path,
    schema: Mapping[str, str] | None = None,
    *,
    strict: bool = False,
) -> ReadResult:
    """Read an event-log table.

    Rows with an unparseable timestamp or an empty code are collected into
    ``issues`` (or raised, when ``strict``).  Unknown severities map to
    ``Severity.UNKNOWN`` and the row is kept.
    """
    cols = {**DEFAULT_LOG_SCHEMA, **(schema or {})}
    header, reader, fh = _open_rows(path, cols.values())
    idx = {key: header.index(name) for key, name in cols.items()}
    records: list[LogRecord] = []
    issues: list[RowIssue] = []
    with fh:
        for rownum, row in enumerate(reader, start=1):
            if not row:
                continue
            try:
                ts_text = row[idx["timestamp"]]
                code = row[idx["code"]].strip()
            except IndexError:
                issue = RowIssue(rownum, "BadValue", ",".join(row))
            else:
                try:
                    ts = parse_timestamp(ts_text)
                except ValueError:
                    issue = RowIssue(rownum, "BadTimestamp", ts_text)
                else:
                    if code:
                        records.append(
                            LogRecord(
                                machine=row[idx["machine"]].strip(),
                                code=code,
                                severity=Severity.parse(row[idx["severity"]]),
                                detail=row[idx["detail"]],
                                timestamp=ts,
                            )
                        )
                        continue
                    issue = RowIssue(rownum, "BadValue", "empty code")
            if strict:
                raise _issue_error(path, issue)
            issues.append(issue)
    return ReadResult(records, issues)


def read_sensor_csv(
    path: str | Path,
    schema: Mapping[str, str] | None = None,
    *,
    n_positions: int | None = None,
    strict: bool = False,
) -> ReadResult:
    """Read a sensor table (Robot, Position, Value, DateTime).

    ``n_positions`` is the declared K; a position index outside 1..K raises
    `PositionOutOfRange` regardless of ``strict``, since it signals a schema
    mismatch rather than one bad row.  A ``Machine`` column, when present,
    is carried onto each record.
    """
    cols = {**DEFAULT_SENSOR_SCHEMA, **(schema or {})}
    header, reader, fh = _open_rows(path, cols.values())
    idx = {key: header.index(name) for key, name in cols.items()}
    machine_idx = header.index(SENSOR_MACHINE_COLUMN) if SENSOR_MACHINE_COLUMN in header else None
    records: list[SensorRecord] = []
    issues: list[RowIssue] = []
    with fh:
        for rownum, row in enumerate(reader, start=1):
            if not row:
                continue
            issue = None
            try:
                robot = Robot.parse(row[idx["robot"]])
                position = parse_position(row[idx["position"]])
                value = float(row[idx["value"]])
            except (ValueError, IndexError):
                issue = RowIssue(rownum, "BadValue", ",".join(row))
            else:
                if n_positions is not None and not 1 <= position <= n_positions:
                    raise PositionOutOfRange(
                        f"{path}: row {rownum}: position {position} outside 1..{n_positions}"
                    )
                try:
                    ts = parse_timestamp(row[idx["timestamp"]])
                except ValueError:
                    issue = RowIssue(rownum, "BadTimestamp", row[idx["timestamp"]])
                else:
                    machine = row[machine_idx].strip() if machine_idx is not None else None
                    records.append(SensorRecord(robot, position, value, ts, machine))
            if issue is not None:
                if strict:
                    raise _issue_error(path, issue)
                issues.append(issue)
    return ReadResult(records, issues)


def _issue_error(path, issue: RowIssue) -> DataError:
    cls = BadTimestamp if issue.kind == "BadTimestamp" else BadValue
    return cls(f"{path}: row {issue.row}: {issue.text!r}")


def build_dataset(
    logs: Iterable[LogRecord],
    sensors: Iterable[SensorRecord] = (),
    issues: Iterable[RowIssue] = (),
) -> Dataset:
    logs = tuple(logs)
    sensors = tuple(sensors)
    days = [r.timestamp.date() for r in logs] + [r.timestamp.date() for r in sensors]
    if not days:
        raise EmptyDataset("dataset has no log or sensor records")
    return Dataset(
        logs=logs,
        sensors=sensors,
        machines=frozenset(r.machine for r in logs),
        span=(min(days), max(days)),
        issues=tuple(issues),
    )


def write_log_csv(path: str | Path, records: Iterable[LogRecord]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(DEFAULT_LOG_SCHEMA.values())
        for r in records:
            w.writerow([r.machine, r.code, r.severity.value, r.detail, format_timestamp(r.timestamp)])


def write_sensor_csv(path: str | Path, records: Iterable[SensorRecord]) -> None:
    records = list(records)
    with_machine = any(r.machine is not None for r in records)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        head = list(DEFAULT_SENSOR_SCHEMA.values())
        w.writerow(([SENSOR_MACHINE_COLUMN] if with_machine else []) + head)
        for r in records:
            row = [r.robot.value, f"P_{r.position}", repr(r.value), format_timestamp(r.timestamp)]
            w.writerow(([r.machine or ""] if with_machine else []) + row)


def load_dataset(
    log_path: str | Path,
    sensor_path: str | Path | None = None,
    *,
    n_positions: int | None = None,
    strict: bool = False,
) -> Dataset:
    logs, issues = read_log_csv(log_path, strict=strict)
    sensors: list[SensorRecord] = []
    if sensor_path is not None:
        sensors, sensor_issues = read_sensor_csv(sensor_path, n_positions=n_positions, strict=strict)
        issues = issues + sensor_issues
    return build_dataset(logs, sensors, issues)
