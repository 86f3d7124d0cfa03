"""Distance-to-k-th-neighbour outlier scores over count-matrix rows."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np

from .countmatrix import EventCountMatrix
from .errors import KTooLarge, TooFewRows, UsageError


@dataclass(frozen=True, eq=False)
class AnomalyResult:
    days: tuple[date, ...]
    scores: np.ndarray
    k: int

    @property
    def top_index(self) -> int:
        # argmax returns the first maximum, i.e. the earliest day on ties
        return int(np.argmax(self.scores))

    @property
    def top_day(self) -> date:
        return self.days[self.top_index]


def kth_neighbor_distances(values: np.ndarray, k: int) -> np.ndarray:
    """Euclidean distance from each row to its k-th nearest other row.

    Exact brute force.  Integer input is squared and summed in int64, so the
    only rounding is the final square root.
    """
    x = np.asarray(values)
    if x.ndim != 2:
        raise UsageError("expected a 2-D matrix")
    n = x.shape[0]
    if n < 2:
        raise TooFewRows(f"need >= 2 rows, got {n}")
    if not 1 <= k < n:
        raise KTooLarge(f"k must be in 1..{n - 1}, got {k}")
    if not np.issubdtype(x.dtype, np.integer):
        x = x.astype(float)
    else:
        x = x.astype(np.int64)
    out = np.empty(n)
    for i in range(n):
        diff = x - x[i]
        sq = np.einsum("ij,ij->i", diff, diff)
        sq = np.delete(sq, i)
        out[i] = np.sqrt(np.partition(sq, k - 1)[k - 1])
    return out


def knn_scores(matrix: EventCountMatrix, k: int = 5) -> AnomalyResult:
    return AnomalyResult(matrix.days, kth_neighbor_distances(matrix.values, k), k)


def write_anomaly_csv(path: str | Path, result: AnomalyResult) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["day", "score"])
        for day, score in zip(result.days, result.scores.tolist()):
            w.writerow([day.isoformat(), repr(score)])


def anomaly_summary(result: AnomalyResult) -> dict:
    return {
        "k": result.k,
        "n_days": len(result.days),
        "first_day": result.days[0].isoformat(),
        "last_day": result.days[-1].isoformat(),
        "top_day": result.top_day.isoformat(),
        "top_score": float(result.scores[result.top_index]),
    }


def write_anomaly_json(path: str | Path, result: AnomalyResult) -> None:
    Path(path).write_text(json.dumps(anomaly_summary(result), indent=2, sort_keys=True) + "\n")
