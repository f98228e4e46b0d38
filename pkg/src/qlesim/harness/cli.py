"""Command line entry point: ``qlesim <group> [--seed S] [--n N] [--out DIR] [--config FILE]``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ExperimentConfig
from .experiments import REGISTRY, get_experiment
from .report import report, report_json, report_text
from .runner import load_record, run_experiment

GROUPS = ("levy", "csbp", "sphere", "qle", "maps", "lqg")


def _param(s: str):
    if "=" not in s:
        raise argparse.ArgumentTypeError("expected key=value")
    k, v = s.split("=", 1)
    try:
        return k, json.loads(v)
    except json.JSONDecodeError:
        return k, v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="64-bit seed (default 0)")
    common.add_argument("--n", type=int, default=argparse.SUPPRESS, help="number of samples (experiment default if omitted)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory (default runs)")
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON file mirroring the flags")
    ap = argparse.ArgumentParser(prog="qlesim", description=__doc__, parents=[common])
    sub = ap.add_subparsers(dest="group", required=True)
    for g in GROUPS:
        ids = sorted(e.id for e in REGISTRY.values() if e.group == g)
        p = sub.add_parser(g, parents=[common], help=f"run {', '.join(ids)}")
        p.add_argument("-e", "--experiment", action="append", choices=ids,
                       help="restrict to one experiment (repeatable)")
        p.add_argument("-p", "--param", action="append", type=_param, default=[],
                       help="override a parameter, key=JSON value")
    p = sub.add_parser("report", parents=[common], help="aggregate the JSON records in --out")
    p.add_argument("records", nargs="*", help="record files (default: every run record in --out)")
    return ap


def _merged(args) -> dict:
    cfg = {}
    if getattr(args, "config", None):
        cfg = json.loads(Path(args.config).read_text())
        extra = set(cfg) - {"seed", "n", "out", "experiment", "params"}
        if extra:
            raise SystemExit(f"unknown config keys {sorted(extra)}")
    for k in ("seed", "n", "out"):
        v = getattr(args, k, None)
        if v is not None:
            cfg[k] = v
    cfg.setdefault("seed", 0)
    cfg.setdefault("out", "runs")
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _merged(args)
    if args.group == "report":
        out = Path(cfg["out"])
        files = [Path(f) for f in args.records] or sorted(
            f for f in out.glob("*.json") if not f.name.startswith("report"))
        if not files:
            print(f"no run records in {out}", file=sys.stderr)
            return 2
        doc = report([load_record(f) for f in files])
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(report_json(doc))
        txt = report_text(doc)
        (out / "report.txt").write_text(txt + "\n")
        print(txt)
        return {"PASS": 0, "FAIL": 1}.get(doc["overall"], 2)
    ids = args.experiment or cfg.get("experiment")
    if isinstance(ids, str):
        ids = [ids]
    if not ids:
        ids = sorted((e for e in REGISTRY.values() if e.group == args.group), key=lambda e: e.criterion)
        ids = [e.id for e in ids]
    params = dict(cfg.get("params", {}))
    params.update(dict(args.param))
    for eid in ids:
        exp = get_experiment(eid)
        if exp.group != args.group:
            raise SystemExit(f"experiment {eid} belongs to '{exp.group}', not '{args.group}'")
        # with several experiments, each takes the overrides it knows
        exp_params = {k: v for k, v in params.items() if k in exp.defaults} if len(ids) > 1 else params
        rec = run_experiment(ExperimentConfig(eid, cfg["seed"], cfg.get("n"), exp_params, cfg["out"]))
        print(f"{eid}: {rec.verdict} ({rec.wall_time:.1f} s)")
        for c in rec.checks:
            print(f"  [{c.verdict}] {c.claim}: estimate {c.estimate} target {c.target} tol {c.tolerance}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
