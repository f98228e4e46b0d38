"""Aggregate run records into an acceptance table."""
from __future__ import annotations

import json

from .config import REPORT_SCHEMA_ID, overall


def report(records) -> dict:
    records = list(records)
    if not records:
        raise ValueError("report needs at least one run record")
    schemas = {r.schema for r in records}
    if len(schemas) != 1:
        raise ValueError(f"schema mismatch across records: {sorted(schemas)}")
    rows = []
    for r in sorted(records, key=lambda r: (r.criterion, r.config.experiment, r.config.seed)):
        for c in r.checks:
            rows.append({"criterion": r.criterion, "experiment": r.config.experiment, "seed": r.config.seed,
                         "claim": c.claim, "target": c.target, "estimate": c.estimate,
                         "tolerance": c.tolerance, "verdict": c.verdict, "detail": c.detail})
    return {"schema": REPORT_SCHEMA_ID, "run_schema": schemas.pop(), "rows": rows,
            "overall": overall(r["verdict"] for r in rows)}


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def report_text(doc: dict) -> str:
    lines = [f"{'crit':>4}  {'verdict':<12}  {'experiment':<26}  claim / target / estimate / tolerance"]
    for r in doc["rows"]:
        lines.append(f"{r['criterion']:>4}  {r['verdict']:<12}  {r['experiment']:<26}  {r['claim']}"
                     f" | target {_fmt(r['target'])} | estimate {_fmt(r['estimate'])} | tol {r['tolerance']}"
                     + (f" | {r['detail']}" if r["detail"] else ""))
    lines.append(f"overall: {doc['overall']}")
    return "\n".join(lines)


def report_json(doc: dict) -> str:
    return json.dumps(doc, indent=1, default=str)
