import sys
from datetime import date, datetime, timedelta
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from logsel.detectors import ScoreSeries  # noqa: E402
from logsel.synth import ScenarioSpec, generate  # noqa: E402
from logsel.vectorize import EventSeries  # noqa: E402

DATA = Path(__file__).parent / "data"
D0 = date(2020, 1, 1)


@pytest.fixture
def data_dir() -> Path:
    return DATA


def span_of(n: int, start: date = D0):
    return (start, start + timedelta(days=n - 1))


def event(code, counts, machine="1", start=D0) -> EventSeries:
    counts = np.asarray(counts, dtype=np.int64)
    return EventSeries(machine, code, span_of(len(counts), start), counts)


def scores(values, start=D0) -> ScoreSeries:
    values = np.asarray(values, dtype=float)
    return ScoreSeries(span_of(len(values), start), values)


def ts(day: int, seconds: int = 0) -> datetime:
    return datetime(2020, 1, 1) + timedelta(days=day, seconds=seconds)


@pytest.fixture(scope="session")
def small_scenario():
    """A small gradual-fault machine, cheap enough for unit tests."""
    return generate(ScenarioSpec(seed=11, days=90, n_codes=60, n_relevant=5, fault_day=70))


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def criterion(pytestconfig):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number: int, title: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'}  [{number}] {title}: {detail}"
        pytestconfig.stash[_ACCEPTANCE].append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("[", 1)[1].split("]", 1)[0])):
            terminalreporter.write_line(line)
