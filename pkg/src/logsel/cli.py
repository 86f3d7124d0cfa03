"""Command-line front end.

Subcommands mirror the pipeline stages and hand off through files in the
output directory: ``vectorize``, ``select``, ``detect``, ``evaluate``,
``synth`` and ``run-all``.  Every command writes ``manifest.json`` with the
effective configuration and SHA-256 digests of its inputs and outputs.

Exit codes: 0 success, 1 usage error, 2 data error.  Failures print a JSON
error report on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .config import RunConfig, resolve_config
from .countmatrix import write_count_matrix_csv
from .detectors import write_score_series_csv
from .errors import (
    DataError,
    EmptyFile,
    LogselError,
    NoSensorData,
    UsageError,
)
from .evaluation import (
    compare_pipelines,
    judge_detection,
    machine_span,
    read_labels_csv,
    render_comparison,
    write_comparison_csv,
)
from .ingest import Dataset, build_dataset, read_log_csv, read_sensor_csv
from .knn import write_anomaly_csv, write_anomaly_json
from .pipeline import run_detection, run_selection
from .redundancy import write_decisions_csv
from .relevance import (
    relevance_to_json,
    selection_from_json,
    selection_to_json,
    write_json,
    write_relevance_csv,
)
from .synth import ScenarioSpec, generate, generate_fleet, write_scenario
from .vectorize import vectorize_events, write_event_series_csv

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        self.print_usage(sys.stderr)
        print(json.dumps({"error": "UsageError", "message": message}), file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out: Path, command: str, cfg: RunConfig | dict, inputs: dict[str, str | None]) -> None:
    outputs = sorted(
        p for p in out.rglob("*") if p.is_file() and p.name not in ("manifest.json", "error.json")
    )
    manifest = {
        "tool": "logsel",
        "version": __version__,
        "command": command,
        "config": cfg.to_dict() if isinstance(cfg, RunConfig) else cfg,
        "inputs": {
            name: {"path": path, "sha256": sha256(path)}
            for name, path in sorted(inputs.items())
            if path is not None and Path(path).is_file()
        },
        "outputs": {str(p.relative_to(out)): sha256(p) for p in outputs},
    }
    write_json(out / "manifest.json", manifest)


# --- dataset helpers ---------------------------------------------------------


def _load(cfg: RunConfig, *, need_sensors: bool) -> Dataset:
    if cfg.logs is None:
        raise UsageError("--logs is required")
    if need_sensors and (cfg.sensors is None or not Path(cfg.sensors).is_file()):
        raise NoSensorData(f"sensor file not found: {cfg.sensors}")
    _require_file(cfg.logs, "log")
    logs, issues = read_log_csv(cfg.logs, strict=cfg.strict)
    if not logs:
        raise EmptyFile(f"{cfg.logs}: no log records")
    sensors = []
    if need_sensors:
        sensors, sensor_issues = read_sensor_csv(
            cfg.sensors, n_positions=cfg.n_positions, strict=cfg.strict
        )
        issues = issues + sensor_issues
    for issue in issues[:20]:
        print(json.dumps({"warning": issue.kind, "row": issue.row, "text": issue.text}), file=sys.stderr)
    return build_dataset(logs, sensors, issues)


def _require_file(path: str, what: str) -> None:
    if not Path(path).is_file():
        raise DataError(f"{what} file not found: {path}")


def _machine(cfg: RunConfig, dataset: Dataset) -> str:
    if cfg.machine is not None:
        return cfg.machine
    if len(dataset.machines) == 1:
        return next(iter(dataset.machines))
    raise UsageError(
        f"--machine is required, dataset has machines {sorted(dataset.machines)}"
    )


def _out(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _machine_sort_key(m: str):
    return (0, int(m), m) if m.isdigit() else (1, 0, m)


# --- commands ----------------------------------------------------------------


def cmd_vectorize(cfg: RunConfig) -> int:
    dataset = _load(cfg, need_sensors=False)
    span = cfg.span or dataset.span
    machines = [cfg.machine] if cfg.machine else sorted(dataset.machines, key=_machine_sort_key)
    series = []
    for m in machines:
        series.extend(vectorize_events(dataset, m, span))
    out = _out(cfg)
    write_event_series_csv(out / "event_series.csv", series)
    write_manifest(out, "vectorize", cfg, {"logs": cfg.logs})
    return EXIT_OK


def _select_into(out: Path, dataset: Dataset, machine: str, robot: str, cfg: RunConfig, span=None):
    run = run_selection(dataset, machine, robot, cfg, span)
    write_relevance_csv(out / "relevance.csv", run.report)
    write_json(out / "relevance.json", relevance_to_json(run.report))
    write_json(out / "selection_relevance.json", selection_to_json(run.relevant))
    write_json(out / "selection.json", selection_to_json(run.final))
    write_decisions_csv(out / "redundancy.csv", run.decisions)
    write_score_series_csv(
        out / "sensor_scores.csv",
        {f"P_{k}": s for k, s in enumerate(run.sensor_scores, start=1)},
    )
    return run


def cmd_select(cfg: RunConfig) -> int:
    dataset = _load(cfg, need_sensors=True)
    out = _out(cfg)
    _select_into(out, dataset, _machine(cfg, dataset), cfg.robot, cfg)
    write_manifest(out, "select", cfg, {"logs": cfg.logs, "sensors": cfg.sensors})
    return EXIT_OK


def _detect_into(out: Path, events, codes, span, k: int):
    matrix, result = run_detection(events, codes, span, k)
    write_count_matrix_csv(out / "count_matrix.csv", matrix)
    write_anomaly_csv(out / "anomaly.csv", result)
    write_anomaly_json(out / "anomaly.json", result)
    return matrix, result


def cmd_detect(cfg: RunConfig) -> int:
    dataset = _load(cfg, need_sensors=False)
    machine = _machine(cfg, dataset)
    span = cfg.span or dataset.span
    events = vectorize_events(dataset, machine, span)
    codes = None
    if cfg.selection is not None:
        _require_file(cfg.selection, "selection")
        codes = selection_from_json(json.loads(Path(cfg.selection).read_text())).selected
    out = _out(cfg)
    _detect_into(out, events, codes, span, cfg.k)
    write_manifest(out, "detect", cfg, {"logs": cfg.logs, "selection": cfg.selection})
    return EXIT_OK


def cmd_evaluate(cfg: RunConfig) -> int:
    if cfg.labels is None:
        raise UsageError("--labels is required")
    _require_file(cfg.labels, "labels")
    labels = read_labels_csv(cfg.labels)
    dataset = _load(cfg, need_sensors=cfg.sensors is not None)
    cmp = compare_pipelines(dataset, labels, cfg, select=cfg.sensors is not None)
    out = _out(cfg)
    write_comparison_csv(out / "comparison.csv", cmp)
    text = render_comparison(cmp)
    (out / "comparison.txt").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    write_manifest(
        out, "evaluate", cfg, {"logs": cfg.logs, "sensors": cfg.sensors, "labels": cfg.labels}
    )
    return EXIT_OK


def cmd_run_all(cfg: RunConfig) -> int:
    """select + detect for every machine, then the comparison table."""
    dataset = _load(cfg, need_sensors=True)
    out = _out(cfg)
    labels = read_labels_csv(cfg.labels) if cfg.labels else []
    if labels:
        targets = [(lab.machine, lab.robot.value, lab) for lab in labels]
    else:
        machines = [cfg.machine] if cfg.machine else sorted(dataset.machines, key=_machine_sort_key)
        targets = [(m, cfg.robot, None) for m in machines]
    summary = []
    for machine, robot, label in targets:
        mdir = out / f"machine_{machine}"
        mdir.mkdir(exist_ok=True)
        try:
            run = _select_into(mdir, dataset, machine, robot, cfg, cfg.span or machine_span(dataset, machine))
            end = label.replacement_date if label is not None else run.events[0].span[1]
            span = (run.events[0].span[0], end)
            _, result = _detect_into(mdir, run.events, run.final.selected, span, cfg.k)
        except LogselError as exc:
            write_json(mdir / "error.json", exc.to_report())
            summary.append({"machine": machine, "robot": robot, "error": exc.kind})
            continue
        entry = {"machine": machine, "robot": robot, "top_day": result.top_day.isoformat()}
        if label is not None:
            verdict = judge_detection(result, label, cfg.window)
            entry.update(detected=verdict.detected, lead_days=verdict.lead_days)
        summary.append(entry)
    write_json(out / "summary.json", summary)
    if labels:
        cmp = compare_pipelines(dataset, labels, cfg)
        write_comparison_csv(out / "comparison.csv", cmp)
        text = render_comparison(cmp)
        (out / "comparison.txt").write_text(text, encoding="utf-8")
        sys.stdout.write(text)
    write_manifest(
        out, "run-all", cfg, {"logs": cfg.logs, "sensors": cfg.sensors, "labels": cfg.labels}
    )
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    spec = ScenarioSpec(
        seed=args.seed,
        n_machines=args.machines,
        days=args.days,
        n_positions=args.positions,
        n_codes=args.codes,
        n_relevant=args.relevant,
        fault_kind="gradual" if args.fault_kind == "mixed" else args.fault_kind,
        fault_day=args.fault_day,
        lead_days=args.lead_days,
        noise_rate=args.noise_rate,
    )
    if args.fault_kind == "mixed":
        n_gradual = (args.machines + 1) // 2
        dataset, truth = generate_fleet(spec, n_gradual, args.machines - n_gradual)
    else:
        dataset, truth = generate(spec)
    out = Path(args.out)
    paths = write_scenario(out, dataset, truth)
    config = spec.to_dict()
    config["fault_kind"] = args.fault_kind
    write_manifest(out, "synth", config, {})
    print(json.dumps({k: str(v) for k, v in paths.items()}, sort_keys=True))
    return EXIT_OK


# --- argument parsing --------------------------------------------------------


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    # defaults are None so that unset flags fall through to the config file
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--logs", help="event log CSV")
    p.add_argument("--sensors", help="sensor CSV")
    p.add_argument("--labels", help="fault labels CSV")
    p.add_argument("--out", help="output directory (default: out)")
    p.add_argument("--machine")
    p.add_argument("--robot", help="Load or Unload (default: Load)")
    p.add_argument("--span-start", help="YYYY-MM-DD")
    p.add_argument("--span-end", help="YYYY-MM-DD")
    p.add_argument("--fraction", help="relevance cut, fraction of codes kept (default 0.2)")
    p.add_argument("--target-count", help="features kept after redundancy removal (default 40)")
    p.add_argument("--rho", help="redundancy |tau| threshold (default 0.8)")
    p.add_argument("-k", "--k", dest="k", help="KNN neighbour rank (default 5)")
    p.add_argument("--window", help="detection window in days (default 14)")
    p.add_argument("--ddof", help="1 = sample std (default), 0 = population std")
    p.add_argument("--tau-variant", help="b (tie-corrected, default) or a")
    p.add_argument("--aggregate", help="max (default) or mean over sensor positions")
    p.add_argument("--redundancy-basis", help="scores (default) or counts")
    p.add_argument("--n-positions", help="declared number of sensor positions K")
    p.add_argument("--strict", action="store_const", const=True, help="fail on malformed rows")
    p.add_argument("--selection", help="selection.json to restrict detect to")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="logsel", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"logsel {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_ in (
        ("vectorize", "daily event-count series per machine and code"),
        ("select", "relevance ranking and redundancy pruning for one machine"),
        ("detect", "count matrix and KNN anomaly scores for one machine"),
        ("evaluate", "all-features vs selected-features detection table"),
        ("run-all", "select + detect per labelled machine, then evaluate"),
    ):
        _add_run_flags(sub.add_parser(name, help=help_))

    s = sub.add_parser("synth", help="generate a synthetic fleet")
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--machines", type=int, default=12)
    s.add_argument("--days", type=int, default=180)
    s.add_argument("--positions", type=int, default=4)
    s.add_argument("--codes", type=int, default=300)
    s.add_argument("--relevant", type=int, default=10)
    s.add_argument("--fault-kind", choices=("gradual", "sudden", "mixed"), default="mixed")
    s.add_argument("--fault-day", type=int, default=None)
    s.add_argument("--lead-days", type=int, default=10)
    s.add_argument("--noise-rate", type=float, default=0.5)
    return parser


_COMMANDS = {
    "vectorize": cmd_vectorize,
    "select": cmd_select,
    "detect": cmd_detect,
    "evaluate": cmd_evaluate,
    "run-all": cmd_run_all,
}
_RUN_KEYS = [f for f in RunConfig.__dataclass_fields__]


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "synth":
            return cmd_synth(args)
        flags = {key: getattr(args, key) for key in _RUN_KEYS if hasattr(args, key)}
        cfg = resolve_config(flags, args.config)
        return _COMMANDS[args.command](cfg)
    except LogselError as exc:
        print(json.dumps(exc.to_report()), file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, UsageError) else EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
