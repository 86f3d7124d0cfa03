from datetime import date

import pytest

from logsel.config import RunConfig, coerce, read_config_file, resolve_config
from logsel.errors import UsageError


def test_defaults():
    cfg = resolve_config()
    assert (cfg.fraction, cfg.target_count, cfg.k, cfg.window, cfg.rho) == (0.2, 40, 5, 14, 0.8)


def test_precedence_flags_over_file_over_defaults(tmp_path):
    f = tmp_path / "run.cfg"
    f.write_text("# comment\nk = 7\nwindow = 3  # trailing\ntarget-count = 12\n")
    cfg = resolve_config({"k": "9", "window": None}, f)
    assert cfg.k == 9  # flag wins
    assert cfg.window == 3  # file wins over default; None flag is unset
    assert cfg.target_count == 12
    assert cfg.fraction == 0.2  # default


@pytest.mark.parametrize(
    "key, raw, value",
    [
        ("fraction", "0.5", 0.5),
        ("strict", "yes", True),
        ("strict", "off", False),
        ("span_start", "2020-02-03", date(2020, 2, 3)),
        ("machine", "none", None),
        ("machine", "12", "12"),
        ("k", 3, 3),
    ],
)
def test_coerce(key, raw, value):
    assert coerce(key, raw) == value


@pytest.mark.parametrize("key, raw", [("k", "five"), ("strict", "maybe"), ("span_end", "2020-13-01"), ("nope", "1")])
def test_coerce_errors(key, raw):
    with pytest.raises(UsageError):
        coerce(key, raw)


def test_file_errors(tmp_path):
    with pytest.raises(UsageError):
        read_config_file(tmp_path / "missing.cfg")
    bad = tmp_path / "bad.cfg"
    bad.write_text("k 5\n")
    with pytest.raises(UsageError, match="bad.cfg:1"):
        read_config_file(bad)


@pytest.mark.parametrize(
    "flags",
    [
        {"fraction": 0.0},
        {"fraction": 1.2},
        {"target_count": 0},
        {"rho": 0.0},
        {"k": 0},
        {"window": -1},
        {"ddof": 2},
        {"tau_variant": "c"},
        {"aggregate": "median"},
        {"robot": "arm"},
        {"span_start": "2020-01-05"},
        {"span_start": "2020-01-05", "span_end": "2020-01-01"},
    ],
)
def test_validation(flags):
    with pytest.raises(UsageError):
        resolve_config(flags)


def test_to_dict_is_json_ready():
    d = RunConfig(span_start=date(2020, 1, 1), span_end=date(2020, 2, 1)).to_dict()
    assert d["span_start"] == "2020-01-01" and d["window"] == 14
