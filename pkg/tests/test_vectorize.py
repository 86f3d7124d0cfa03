import random
from collections import Counter
from datetime import date

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logsel.errors import NoRecordsForMachine, NoSensorData
from logsel.ingest import LogRecord, Robot, Severity, build_dataset, load_dataset
from logsel.vectorize import (
    group_sensors,
    n_days,
    read_event_series_csv,
    vectorize_events,
    write_event_series_csv,
)

from conftest import ts

JAN = lambda d: date(2020, 1, d)  # noqa: E731


def test_table1_daily_counts(data_dir):
    ds = load_dataset(data_dir / "table1.csv")
    series = {s.code: s for s in vectorize_events(ds, "1", (JAN(1), JAN(3)))}
    assert series["AA-BBBB"].pairs() == [(JAN(1), 3), (JAN(2), 0), (JAN(3), 1)]
    assert series["CC-DDDD"].counts.tolist() == [1, 0, 0]
    assert list(series) == sorted(series)


def test_code_outside_span_not_emitted(data_dir):
    ds = load_dataset(data_dir / "table1.csv")
    codes = [s.code for s in vectorize_events(ds, "1", (JAN(2), JAN(3)))]
    assert codes == ["AA-BBBB"]


def test_single_day_span():
    logs = [LogRecord("1", "A", Severity.LOW, "", ts(0, s)) for s in range(5)]
    (s,) = vectorize_events(build_dataset(logs), "1", (JAN(1), JAN(1)))
    assert s.pairs() == [(JAN(1), 5)]


def test_unknown_machine(data_dir):
    ds = load_dataset(data_dir / "table1.csv")
    with pytest.raises(NoRecordsForMachine):
        vectorize_events(ds, "99")


def test_group_sensors_sorted_with_stable_ties(data_dir):
    ds = load_dataset(data_dir / "table1.csv", data_dir / "sensors_dup_seconds.csv")
    p1, p2 = group_sensors(ds, Robot.LOAD)
    assert (p1.position, p2.position) == (1, 2)
    # two samples share 12:00:00; input order (1.0 then 2.0) is kept
    assert p1.values.tolist() == [1.0, 2.0, 3.0]
    assert list(p1.timestamps) == sorted(p1.timestamps)
    assert p2.values.tolist() == [7.0]


def test_group_sensors_missing_robot(data_dir):
    ds = load_dataset(data_dir / "table1.csv", data_dir / "sensors_dup_seconds.csv")
    with pytest.raises(NoSensorData):
        group_sensors(ds, "Unload")


def test_group_sensors_by_machine_tag(small_scenario):
    ds, truth = small_scenario
    series = group_sensors(ds, truth.labels[0].robot, truth.labels[0].machine)
    assert len(series) == 4
    with pytest.raises(NoSensorData):
        group_sensors(ds, "Load", machine="not-a-machine")


def test_event_series_csv_round_trip(tmp_path, small_scenario):
    ds, _ = small_scenario
    series = vectorize_events(ds, "1")
    write_event_series_csv(tmp_path / "e.csv", series)
    back = read_event_series_csv(tmp_path / "e.csv")
    assert [(s.code, s.span) for s in back] == [(s.code, s.span) for s in series]
    assert all(np.array_equal(a.counts, b.counts) for a, b in zip(back, series))


_records = st.lists(
    st.tuples(st.sampled_from(["1", "2"]), st.sampled_from(["A", "B", "C"]), st.integers(0, 9), st.integers(0, 86399)),
    min_size=1,
    max_size=80,
)


@settings(max_examples=100, deadline=None)
@given(rows=_records, lo=st.integers(0, 4), width=st.integers(1, 8), seed=st.integers(0, 10**6))
def test_conservation_density_permutation(rows, lo, width, seed):
    logs = [LogRecord(m, c, Severity.LOW, "", ts(d, s)) for m, c, d, s in rows]
    span = (JAN(1 + lo), JAN(lo + width))
    shuffled = logs[:]
    random.Random(seed).shuffle(shuffled)
    for machine in {r[0] for r in rows}:
        a = vectorize_events(build_dataset(logs), machine, span)
        b = vectorize_events(build_dataset(shuffled), machine, span)
        expected = Counter(
            r.code for r in logs if r.machine == machine and span[0] <= r.timestamp.date() <= span[1]
        )
        assert {s.code: int(s.counts.sum()) for s in a} == dict(expected)
        assert all(len(s.counts) == n_days(span) for s in a)
        assert [(s.code, s.counts.tolist()) for s in a] == [(s.code, s.counts.tolist()) for s in b]
