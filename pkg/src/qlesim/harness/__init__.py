"""Experiment runner: configs, registry, CSV/JSON records and acceptance reports."""
from .config import (FAIL, INCONCLUSIVE, PASS, REPORT_SCHEMA_ID, SCHEMA_ID, Check, ExperimentConfig,
                     RunRecord, overall)
from .experiments import REGISTRY, Experiment, get_experiment
from .report import report, report_json, report_text
from .runner import ExperimentError, load_record, read_csv, run_experiment, save_record

__all__ = ["FAIL", "INCONCLUSIVE", "PASS", "REPORT_SCHEMA_ID", "SCHEMA_ID", "Check", "ExperimentConfig",
           "RunRecord", "overall", "REGISTRY", "Experiment", "get_experiment", "report", "report_json",
           "report_text", "ExperimentError", "load_record", "read_csv", "run_experiment", "save_record"]
