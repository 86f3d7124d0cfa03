"""Synthetic fleets with planted robot faults and planted relevant events.

Each machine gets

* sensor series for both robots: per-position baseline plus white noise,
  measured in sporadic sessions (most days have no measurement at all);
* a fault on one robot.  A *gradual* fault ramps a drift and growing jitter
  into every position from ``onset`` up to the replacement day; a *sudden*
  fault adds a level step with heavy jitter a few days before it;
* ``n_relevant`` event codes that stay silent except in a window starting
  ``lead_days`` before the sensor deviation and ending on the replacement
  day, firing more often as the fault progresses;
* irrelevant codes: Poisson noise at heterogeneous rates, occasional
  isolated bursts, and a few incidents elsewhere in the machine during
  which a large group of irrelevant codes bursts on the same day(s).

After the replacement day the robot is healthy again.  Output is fully
determined by ``ScenarioSpec.seed``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from datetime import date, datetime, timedelta
from pathlib import Path

import numpy as np

from .errors import BadSpec
from .evaluation import FaultLabel, write_labels_csv
from .ingest import (
    Dataset,
    LogRecord,
    Robot,
    SensorRecord,
    Severity,
    build_dataset,
    write_log_csv,
    write_sensor_csv,
)

FAULT_KINDS = ("gradual", "sudden")
_SEVERITIES = (Severity.LOW, Severity.MEDIUM, Severity.HIGH)


@dataclass(frozen=True)
class ScenarioSpec:
    seed: int = 0
    n_machines: int = 1
    days: int = 180
    n_positions: int = 4
    n_codes: int = 300
    n_relevant: int = 10
    fault_kind: str = "gradual"
    fault_day: int | None = None  # default: days - 30
    lead_days: int = 10
    noise_rate: float = 0.5
    start: date = date(2020, 1, 1)
    first_machine: int = 1
    ramp_days: int = 30
    sudden_offset: int = 10  # days the robot runs faulty after a sudden fault
    session_prob: float = 0.35
    burst_rate: float = 0.5  # spurious bursts per irrelevant code over the whole run
    burst_size: float = 6.0  # mean extra count of a spurious burst
    n_incidents: int = 3  # other-subsystem incidents per machine
    incident_codes: int = 40  # irrelevant codes that burst together in one incident
    peak_rate: float = 12.0  # mean daily count of a relevant code at the fault
    fire_prob: float = 0.6  # chance a relevant code fires on an in-window day
    fault_session_prob: float = 0.9

    def validate(self) -> None:
        if self.fault_kind not in FAULT_KINDS:
            raise BadSpec(f"fault_kind must be one of {FAULT_KINDS}, got {self.fault_kind!r}")
        if self.n_machines < 1 or self.days < 2 or self.n_positions < 1:
            raise BadSpec("need n_machines >= 1, days >= 2, n_positions >= 1")
        if not 0 <= self.n_relevant <= self.n_codes or self.n_codes < 1:
            raise BadSpec("need 0 <= n_relevant <= n_codes and n_codes >= 1")
        if not 0 <= self.resolved_fault_day < self.days:
            raise BadSpec(f"fault_day must be in [0, {self.days})")
        if min(self.lead_days, self.ramp_days, self.sudden_offset, self.n_incidents, self.incident_codes) < 0:
            raise BadSpec("day offsets and incident settings must be >= 0")
        if min(self.noise_rate, self.burst_rate, self.burst_size, self.peak_rate) < 0:
            raise BadSpec("rates must be >= 0")
        for name in ("session_prob", "fire_prob", "fault_session_prob"):
            if not 0 < getattr(self, name) <= 1:
                raise BadSpec(f"{name} must be in (0, 1]")

    @property
    def resolved_fault_day(self) -> int:
        return self.days - 30 if self.fault_day is None else self.fault_day

    def to_dict(self) -> dict:
        d = asdict(self)
        d["start"] = self.start.isoformat()
        d["fault_day"] = self.resolved_fault_day
        return d


@dataclass(frozen=True)
class MachineTruth:
    machine: str
    robot: Robot
    fault_kind: str
    onset_day: date  # first day the sensors deviate
    replacement_date: date
    relevant_from: date  # first day relevant codes may fire


@dataclass(frozen=True)
class GroundTruth:
    relevant_codes: frozenset[str]
    labels: tuple[FaultLabel, ...]
    machines: tuple[MachineTruth, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "relevant_codes": sorted(self.relevant_codes),
            "labels": [
                {
                    "machine": lab.machine,
                    "robot": lab.robot.value,
                    "fault_kind": lab.fault_kind,
                    "replacement_date": lab.replacement_date.isoformat(),
                }
                for lab in self.labels
            ],
            "machines": [
                {
                    "machine": m.machine,
                    "robot": m.robot.value,
                    "fault_kind": m.fault_kind,
                    "onset_day": m.onset_day.isoformat(),
                    "replacement_date": m.replacement_date.isoformat(),
                    "relevant_from": m.relevant_from.isoformat(),
                }
                for m in self.machines
            ],
        }


def code_names(n: int) -> list[str]:
    return [f"EV-{i:04d}" for i in range(1, n + 1)]


def _fault_kind_label(kind: str) -> str:
    return "GF_1" if kind == "gradual" else "SF_1"


def generate(spec: ScenarioSpec) -> tuple[Dataset, GroundTruth]:
    spec.validate()
    root = np.random.SeedSequence(spec.seed)
    code_rng, *machine_seeds = (np.random.default_rng(s) for s in root.spawn(spec.n_machines + 1))
    codes = code_names(spec.n_codes)
    relevant_idx = np.sort(code_rng.choice(spec.n_codes, size=spec.n_relevant, replace=False))
    relevant = frozenset(codes[i] for i in relevant_idx)
    # code-level properties shared across the fleet
    rates = spec.noise_rate * code_rng.gamma(0.5, 2.0, size=spec.n_codes)
    severities = [_SEVERITIES[i] for i in code_rng.integers(0, 3, size=spec.n_codes)]

    logs: list[LogRecord] = []
    sensors: list[SensorRecord] = []
    labels: list[FaultLabel] = []
    truths: list[MachineTruth] = []
    for m, rng in enumerate(machine_seeds):
        machine = str(spec.first_machine + m)
        robot = Robot.UNLOAD if (spec.first_machine + m) % 2 else Robot.LOAD
        truth = _machine(
            spec, rng, machine, robot, codes, relevant_idx, rates, severities, logs, sensors
        )
        truths.append(truth)
        labels.append(
            FaultLabel(machine, robot, _fault_kind_label(spec.fault_kind), truth.replacement_date)
        )
    return build_dataset(logs, sensors), GroundTruth(relevant, tuple(labels), tuple(truths))


def _deviation_window(spec: ScenarioSpec) -> tuple[int, int]:
    fault = spec.resolved_fault_day
    if spec.fault_kind == "gradual":
        return max(0, fault - spec.ramp_days), fault
    return max(0, fault - spec.sudden_offset), fault


def _machine(spec, rng, machine, robot, codes, relevant_idx, rates, severities, logs, sensors):
    days = spec.days
    fault = spec.resolved_fault_day
    onset, _ = _deviation_window(spec)
    rel_from = max(0, onset - spec.lead_days)
    day0 = datetime.combine(spec.start, datetime.min.time())

    # --- event counts, shape (days, n_codes)
    counts = rng.poisson(rates, size=(days, len(codes)))
    n_bursts = rng.poisson(spec.burst_rate, size=len(codes))
    for j in np.flatnonzero(n_bursts):
        burst_days = rng.integers(0, days, size=n_bursts[j])
        counts[burst_days, j] += rng.poisson(spec.burst_size, size=n_bursts[j])
    irrelevant_idx = np.setdiff1d(np.arange(len(codes)), relevant_idx)
    for _ in range(spec.n_incidents):
        if irrelevant_idx.size == 0:
            break
        d = int(rng.integers(0, days))
        width = min(int(rng.integers(1, 3)), days - d)
        hit = rng.choice(irrelevant_idx, size=min(spec.incident_codes, irrelevant_idx.size), replace=False)
        counts[d : d + width, hit] += rng.poisson(spec.burst_size, size=(width, hit.size))
    counts[:, relevant_idx] = 0
    window = np.arange(rel_from, fault + 1)
    if spec.fault_kind == "gradual":
        progress = (window - rel_from + 1) / (fault - rel_from + 1)
        lam = 1.0 + (spec.peak_rate - 1.0) * progress**2
    else:
        lam = np.where(window >= onset, spec.peak_rate, 1.0)
    for j in relevant_idx:
        fires = rng.random(window.size) < spec.fire_prob
        counts[window, j] = fires * (1 + rng.poisson(np.maximum(lam - 1.0, 0.0)))

    for d, j in zip(*np.nonzero(counts)):
        n = int(counts[d, j])
        seconds = np.sort(rng.integers(0, 86400, size=n))
        base = day0 + timedelta(days=int(d))
        for s in seconds.tolist():
            logs.append(
                LogRecord(machine, codes[j], severities[j], "description", base + timedelta(seconds=s))
            )

    # --- sensor sessions
    # a degrading robot is checked more often
    session_p = np.full(days, spec.session_prob)
    session_p[onset : fault + 1] = max(spec.session_prob, spec.fault_session_prob)
    session_days = np.flatnonzero(rng.random(days) < session_p)
    for r in (Robot.LOAD, Robot.UNLOAD):
        baseline = rng.uniform(-0.05, 0.05, size=spec.n_positions)
        sign = rng.choice([-1.0, 1.0], size=spec.n_positions)
        for d in session_days.tolist():
            n_meas = 1 + rng.poisson(1.0)
            starts = np.sort(rng.integers(0, 86400 - 600, size=n_meas))
            for s in starts.tolist():
                noise = rng.normal(0.0, 0.004, size=spec.n_positions)
                offset, jitter = _fault_effect(spec, d, onset, fault) if r is robot else (0.0, 0.0)
                values = baseline + sign * offset + noise + rng.normal(0.0, 1.0, spec.n_positions) * jitter
                for k in range(spec.n_positions):
                    ts = day0 + timedelta(days=d, seconds=s + 10 * k)
                    sensors.append(SensorRecord(r, k + 1, round(float(values[k]), 6), ts, machine))

    first_day = spec.start
    return MachineTruth(
        machine=machine,
        robot=robot,
        fault_kind=spec.fault_kind,
        onset_day=first_day + timedelta(days=onset),
        replacement_date=first_day + timedelta(days=fault),
        relevant_from=first_day + timedelta(days=rel_from),
    )


def _fault_effect(spec: ScenarioSpec, d: int, onset: int, fault: int) -> tuple[float, float]:
    """(level offset, extra noise std) of the faulty robot on day ``d``."""
    if not onset <= d <= fault:
        return 0.0, 0.0
    if spec.fault_kind == "gradual":
        p = (d - onset + 1) / (fault - onset + 1)
        return 0.04 * p, 0.03 * p
    return 0.06, 0.03


def generate_fleet(spec: ScenarioSpec, n_gradual: int, n_sudden: int) -> tuple[Dataset, GroundTruth]:
    """A fleet mixing both fault kinds, sharing one code vocabulary.

    Machines ``1..n_gradual`` get gradual faults, the rest sudden ones.
    """
    parts = []
    if n_gradual:
        parts.append(generate(replace(spec, n_machines=n_gradual, fault_kind="gradual")))
    if n_sudden:
        parts.append(
            generate(
                replace(
                    spec,
                    n_machines=n_sudden,
                    fault_kind="sudden",
                    first_machine=spec.first_machine + n_gradual,
                    seed=spec.seed + 1_000_003,
                )
            )
        )
    if not parts:
        raise BadSpec("fleet must contain at least one machine")
    return merge(parts)


def merge(parts: list[tuple[Dataset, GroundTruth]]) -> tuple[Dataset, GroundTruth]:
    logs, sensors, labels, truths = [], [], [], []
    relevant: set[str] = set()
    for ds, gt in parts:
        logs.extend(ds.logs)
        sensors.extend(ds.sensors)
        labels.extend(gt.labels)
        truths.extend(gt.machines)
        relevant |= gt.relevant_codes
    return build_dataset(logs, sensors), GroundTruth(frozenset(relevant), tuple(labels), tuple(truths))


def write_scenario(out_dir: str | Path, dataset: Dataset, truth: GroundTruth) -> dict[str, Path]:
    """Write logs.csv, sensors.csv, labels.csv and ground_truth.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "logs": out / "logs.csv",
        "sensors": out / "sensors.csv",
        "labels": out / "labels.csv",
        "ground_truth": out / "ground_truth.json",
    }
    write_log_csv(paths["logs"], dataset.logs)
    write_sensor_csv(paths["sensors"], dataset.sensors)
    write_labels_csv(paths["labels"], truth.labels)
    paths["ground_truth"].write_text(json.dumps(truth.to_json(), indent=2, sort_keys=True) + "\n")
    return paths
