"""Exception hierarchy shared by every pipeline stage."""

from __future__ import annotations


class LogselError(Exception):
    """Base class. ``kind`` is the machine-readable error name."""

    kind = "Error"

    def to_report(self) -> dict[str, str]:
        return {"error": self.kind, "message": str(self)}


class DataError(LogselError):
    """Bad or insufficient input data (CLI exit code 2)."""

    kind = "DataError"


class UsageError(LogselError):
    """Invalid arguments or configuration (CLI exit code 1)."""

    kind = "UsageError"


# ingest
class MissingColumn(DataError):
    kind = "MissingColumn"


class BadTimestamp(DataError):
    kind = "BadTimestamp"


class BadValue(DataError):
    kind = "BadValue"


class EmptyFile(DataError):
    kind = "EmptyFile"


class PositionOutOfRange(DataError):
    kind = "PositionOutOfRange"


class EmptyDataset(DataError):
    kind = "EmptyDataset"


# vectorize / detectors
class NoRecordsForMachine(DataError):
    kind = "NoRecordsForMachine"


class NoSensorData(DataError):
    kind = "NoSensorData"


class TooShort(DataError):
    kind = "TooShort"


# relevance / redundancy / countmatrix
class SpanMismatch(DataError):
    kind = "SpanMismatch"


class EmptyReport(DataError):
    kind = "EmptyReport"


class EmptySelection(DataError):
    kind = "EmptySelection"


class UnknownCode(DataError):
    kind = "UnknownCode"


class BadFraction(UsageError):
    kind = "BadFraction"


# knn / evaluation / synth
class KTooLarge(UsageError):
    kind = "KTooLarge"


class TooFewRows(DataError):
    kind = "TooFewRows"


class DateOutOfRange(DataError):
    kind = "DateOutOfRange"


class BadSpec(UsageError):
    kind = "BadSpec"
