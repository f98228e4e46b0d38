"""Run experiments and persist their records as CSV + JSON."""
from __future__ import annotations

import csv
import json
import math
import time
from importlib import metadata
from pathlib import Path

from .config import FAIL, PASS, SCHEMA_ID, Check, ExperimentConfig, RunRecord
from .experiments import get_experiment, resolve_params


class ExperimentError(RuntimeError):
    pass


def code_version() -> str:
    try:
        return metadata.version("qlesim")
    except metadata.PackageNotFoundError:
        return "unknown"


def _cell(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float) or type(v).__name__.startswith("float"):
        return repr(float(v))
    if hasattr(v, "item"):
        return str(v.item())
    return str(v)


def output_paths(config: ExperimentConfig):
    stem = f"{config.experiment}_seed{config.seed}"
    out = Path(config.out)
    return out / f"{stem}.csv", out / f"{stem}.json"


def write_csv(path: Path, experiment: str, columns, rows):
    with open(path, "w", newline="") as fh:
        fh.write(f"# schema={SCHEMA_ID} experiment={experiment}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(v) for v in r])


def read_csv(path):
    with open(path, newline="") as fh:
        head = fh.readline().strip()
        rows = list(csv.reader(fh))
    return head, rows[0], rows[1:]


def _json_safe(x):
    if isinstance(x, dict):
        return {str(k): _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    if hasattr(x, "item"):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def run_experiment(config: ExperimentConfig, write: bool = True) -> RunRecord:
    """Run one registered experiment; deterministic given (config, seed)."""
    exp = get_experiment(config.experiment)
    params = resolve_params(exp, config.params)
    n = config.n_samples if config.n_samples is not None else exp.default_n
    if exp.default_n is not None:
        n = int(n)
    t0 = time.perf_counter()
    try:
        rows, summary, checks = exp.run(params, int(config.seed), n)
    except Exception as ex:
        raise ExperimentError(f"experiment {exp.id} (seed {config.seed}) failed: {ex}") from ex
    wall = time.perf_counter() - t0
    checks = list(checks)
    if exp.budget is not None:
        checks.append(Check("wall time within budget", f"< {exp.budget:g} s", round(wall, 3),
                            f"{exp.budget:g} s", PASS if wall < exp.budget else FAIL))
    snap = ExperimentConfig(exp.id, config.seed, n, params, config.out)
    rec = RunRecord(snap, exp.criterion, code_version(), wall, exp.columns, rows, _json_safe(summary), checks)
    for r in rows:
        if len(r) != len(exp.columns):
            raise ExperimentError(f"experiment {exp.id} produced a row of width {len(r)}, schema has {len(exp.columns)}")
    if write:
        save_record(rec)
    return rec


def save_record(rec: RunRecord):
    out = Path(rec.config.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path, json_path = output_paths(rec.config)
    try:
        write_csv(csv_path, rec.config.experiment, rec.columns, rec.rows)
        json_path.write_text(json.dumps(_json_safe(rec.to_json()), indent=1, default=str))
    except BaseException:
        for p in (csv_path, json_path):
            p.unlink(missing_ok=True)
        raise
    return csv_path, json_path


def load_record(path) -> RunRecord:
    d = json.loads(Path(path).read_text())
    if d.get("schema") != SCHEMA_ID:
        raise ValueError(f"{path}: schema {d.get('schema')!r}, expected {SCHEMA_ID!r}")
    return RunRecord.from_json(d)

