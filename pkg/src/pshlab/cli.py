"""``pshlab`` command line: ``run --config FILE`` and ``list-scenarios``.

Exit codes: 0 when every hard check passes, 1 on a hard-check failure,
2 on a usage or configuration error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, load_config
from .errors import ConfigError
from .scenarios import SCENARIOS, ScenarioResult, run_scenario

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def format_cell(v) -> str:
    """Deterministic text for one CSV cell; floats use the shortest round-trip repr."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        return repr(v)
    if isinstance(v, complex):
        return f"{v.real!r}{v.imag:+}j"
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def write_reports(cfg: ExperimentConfig, result: ScenarioResult, prefix: str,
                  started: float | None = None) -> tuple[Path, Path]:
    """Write ``<prefix>.csv`` and ``<prefix>.summary.json``; returns both paths."""
    rows = [{"scenario": cfg.scenario, **r} for r in result.rows]
    header: list[str] = []
    for r in rows:
        header += [k for k in r if k not in header]
    csv_path, json_path = Path(prefix + ".csv"), Path(prefix + ".summary.json")
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([format_cell(r.get(k)) for k in header])
    documented = {k: v for k, v in result.columns.items() if k in header or k.startswith("<")}
    documented["scenario"] = "scenario name"
    summary = {"scenario": cfg.scenario, "config": cfg.to_dict(), "summary": result.summary,
               "hard_failures": result.failures, "passed": not result.failures,
               "columns": documented, "undocumented_columns": [k for k in header if k not in documented
                                                               and "@" not in k and not k.endswith("_rel_change")],
               "timestamp_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())}
    if started is not None:
        summary["elapsed_seconds"] = time.perf_counter() - started
    with open(json_path, "w") as fh:
        json.dump(_jsonable(summary), fh, indent=2, sort_keys=False)
        fh.write("\n")
    return csv_path, json_path


def list_scenarios() -> str:
    return "\n".join(f"{s.name}: {s.anchor}" for s in SCENARIOS.values())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pshlab", description="Numerical experiments on PSH growth bounds.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario from a TOML config")
    run.add_argument("--config", required=True)
    run.add_argument("--resolution", type=int)
    run.add_argument("--refine", type=int, help="second resolution for cross-resolution changes")
    run.add_argument("--seed", type=int)
    run.add_argument("--out")
    run.add_argument("--workers", type=int)
    sub.add_parser("list-scenarios", help="print the scenario registry")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "list-scenarios":
        print(list_scenarios())
        return EXIT_OK
    started = time.perf_counter()
    try:
        cfg = load_config(args.config, SCENARIOS)
        cfg = cfg.with_overrides(resolution=args.resolution, refine=args.refine, seed=args.seed,
                                 out=args.out, workers=args.workers)
        if cfg.resolution < 16 or (cfg.refine is not None and cfg.refine < 16):
            raise ConfigError("must be >= 16", "resolution")
        result = run_scenario(cfg)
    except ConfigError as exc:
        print(f"pshlab: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    csv_path, json_path = write_reports(cfg, result, cfg.out, started)
    print(f"wrote {csv_path} and {json_path}")
    for msg in result.failures:
        print(f"FAIL {msg}", file=sys.stderr)
    return EXIT_FAIL if result.failures else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
