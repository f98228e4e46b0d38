"""Experiment configuration and run records."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

SCHEMA_ID = "qlesim.run/1"
REPORT_SCHEMA_ID = "qlesim.report/1"

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    seed: int = 0
    n_samples: int | None = None      # None: the experiment's default
    params: dict = field(default_factory=dict)
    out: str = "runs"

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.n_samples is not None and int(self.n_samples) < 1:
            raise ValueError("n_samples must be positive")
        object.__setattr__(self, "params", dict(self.params))

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "ExperimentConfig":
        known = {"experiment", "seed", "n_samples", "params", "out"}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config keys {sorted(extra)}")
        return cls(**d)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_json(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class Check:
    """One acceptance row: claim, target, estimate, tolerance, verdict."""

    claim: str
    target: object
    estimate: object
    tolerance: str
    verdict: str
    detail: str = ""

    def __post_init__(self):
        if self.verdict not in (PASS, FAIL, INCONCLUSIVE):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.estimate is None and self.verdict == PASS:
            raise ValueError("a check without an estimate cannot pass")


@dataclass
class RunRecord:
    config: ExperimentConfig
    criterion: int
    code_version: str
    wall_time: float
    columns: tuple
    rows: list
    summary: dict
    checks: list
    schema: str = SCHEMA_ID

    @property
    def verdict(self) -> str:
        return overall([c.verdict for c in self.checks])

    def to_json(self) -> dict:
        return {"schema": self.schema, "experiment": self.config.experiment, "criterion": self.criterion,
                "config": self.config.to_json(), "code_version": self.code_version,
                "wall_time": self.wall_time, "columns": list(self.columns), "n_rows": len(self.rows),
                "summary": self.summary, "checks": [asdict(c) for c in self.checks],
                "verdict": self.verdict}

    @classmethod
    def from_json(cls, d: dict) -> "RunRecord":
        return cls(ExperimentConfig.from_json(d["config"]), d["criterion"], d["code_version"],
                   d["wall_time"], tuple(d["columns"]), [], d["summary"],
                   [Check(**c) for c in d["checks"]], d["schema"])


def overall(verdicts) -> str:
    v = list(verdicts)
    if not v:
        return INCONCLUSIVE
    if FAIL in v:
        return FAIL
    if INCONCLUSIVE in v:
        return INCONCLUSIVE
    return PASS
