"""Greedy removal of mutually rank-correlated events."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .detectors import robust_score_values
from .errors import EmptySelection, UnknownCode, UsageError
from .relevance import SelectionResult, pair_signs, tau_from_signs
from .vectorize import EventSeries

BASES = ("scores", "counts")


@dataclass(frozen=True)
class PruneDecision:
    code: str
    kept: bool
    reason: str  # "kept", "redundant:<code>", "refill", "over_target"
    tau: float | None = None


def prune_redundant(
    selected: SelectionResult,
    events: Sequence[EventSeries],
    target_count: int,
    rho: float = 0.8,
    *,
    basis: str = "scores",
    variant: str = "b",
    ddof: int = 1,
    decisions: list[PruneDecision] | None = None,
) -> SelectionResult:
    """Walk ``selected`` in relevance order and drop redundant codes.

    A code is dropped when ``|tau|`` against any already-kept code exceeds
    ``rho``.  The walk stops once ``target_count`` codes are kept; if it runs
    out first, the best-ranked dropped codes are added back until the target
    is met.  Output keeps the input's relevance order.

    ``basis`` picks what is correlated: robust scores (default) or raw counts.
    Pass a list as ``decisions`` to receive the per-code audit trail.
    """
    if not selected.selected:
        raise EmptySelection("nothing to prune")
    if target_count < 1:
        raise UsageError(f"target_count must be >= 1, got {target_count}")
    if not 0.0 < rho <= 1.0:
        raise UsageError(f"rho must be in (0, 1], got {rho}")
    if basis not in BASES:
        raise UsageError(f"unknown redundancy basis {basis!r}")
    by_code = {e.code: e for e in events}
    missing = [c for c in selected.selected if c not in by_code]
    if missing:
        raise UnknownCode(f"selected codes without series: {missing[:5]}")

    signs = {}
    for code in selected.selected:
        counts = by_code[code].counts
        values = robust_score_values(counts, ddof) if basis == "scores" else counts
        signs[code] = pair_signs(values)

    order = list(selected.selected)
    kept: list[str] = []
    dropped: list[str] = []
    trail: dict[str, PruneDecision] = {}
    for code in order:
        if len(kept) >= target_count:
            trail[code] = PruneDecision(code, False, "over_target")
            continue
        worst, worst_tau = None, 0.0
        for other in kept:
            t = tau_from_signs(signs[code], signs[other], variant)
            if abs(t) > rho:
                worst, worst_tau = other, t
                break
        if worst is None:
            kept.append(code)
            trail[code] = PruneDecision(code, True, "kept")
        else:
            dropped.append(code)
            trail[code] = PruneDecision(code, False, f"redundant:{worst}", worst_tau)

    for code in dropped:
        if len(kept) >= target_count:
            break
        kept.append(code)
        trail[code] = PruneDecision(code, True, "refill", trail[code].tau)

    kept_set = set(kept)
    result = SelectionResult(
        selected=tuple(c for c in order if c in kept_set),
        threshold_used=rho,
        stage="redundancy",
        dropped=tuple(c for c in order if c not in kept_set),
    )
    if decisions is not None:
        decisions.extend(trail[c] for c in order)
    return result


def write_decisions_csv(path: str | Path, decisions: Sequence[PruneDecision]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["code", "kept", "reason", "tau"])
        for d in decisions:
            w.writerow([d.code, int(d.kept), d.reason, "" if d.tau is None else repr(d.tau)])
