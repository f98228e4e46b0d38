import json

import pytest

from qlesim.harness import cli, runner
from qlesim.harness.config import FAIL, INCONCLUSIVE, PASS, Check, ExperimentConfig, RunRecord, overall
from qlesim.harness.experiments import REGISTRY, Experiment, get_experiment, register
from qlesim.harness.report import report, report_text
from qlesim.harness.runner import ExperimentError, load_record, read_csv, run_experiment

FAST = "levy.u_identities"


@pytest.fixture
def toy_experiments():
    def ok(p, seed, n):
        return [(i, seed * 0.5 + i) for i in range(n)], {"n": n}, [Check("toy", 1.0, 1.0, "+-0", PASS)]

    def empty(p, seed, n):
        return [], {}, [Check("no data", 1.0, None, "+-0", INCONCLUSIVE)]

    def boom(p, seed, n):
        raise RuntimeError("kaboom")

    def wide(p, seed, n):
        return [(1, 2, 3)], {}, []

    exps = [Experiment("toy.ok", 90, "levy", "ok", ("i", "x"), ok, {"k": 1}, 3),
            Experiment("toy.empty", 91, "levy", "empty", ("i", "x"), empty),
            Experiment("toy.boom", 92, "levy", "boom", ("i",), boom),
            Experiment("toy.wide", 93, "levy", "wide", ("i",), wide)]
    for e in exps:
        register(e)
    yield
    for e in exps:
        REGISTRY.pop(e.id)


def test_byte_identical_outputs(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run_experiment(ExperimentConfig(FAST, 3, out=str(a)))
    run_experiment(ExperimentConfig(FAST, 3, out=str(b)))
    name = f"{FAST}_seed3.csv"
    assert (a / name).read_bytes() == (b / name).read_bytes()
    head, cols, rows = read_csv(a / name)
    assert head == f"# schema=qlesim.run/1 experiment={FAST}"
    assert tuple(cols) == get_experiment(FAST).columns and rows


def test_seed_changes_rows_not_schema(tmp_path):
    run_experiment(ExperimentConfig(FAST, 1, out=str(tmp_path)))
    run_experiment(ExperimentConfig(FAST, 2, out=str(tmp_path)))
    h1, c1, r1 = read_csv(tmp_path / f"{FAST}_seed1.csv")
    h2, c2, r2 = read_csv(tmp_path / f"{FAST}_seed2.csv")
    assert (h1, c1) == (h2, c2) and r1 != r2


def test_unknown_experiment_lists_ids():
    with pytest.raises(KeyError) as ei:
        get_experiment("nope")
    for eid in ("csbp.laplace", "maps.peeling_counts", "lqg.coord_change"):
        assert eid in str(ei.value)


def test_fourteen_criteria_registered():
    crit = sorted(e.criterion for e in REGISTRY.values() if e.criterion < 90)
    assert crit == list(range(1, 15))


def test_unknown_param_rejected(tmp_path, toy_experiments):
    with pytest.raises(ValueError, match="unknown parameters"):
        run_experiment(ExperimentConfig("toy.ok", params={"bad": 1}, out=str(tmp_path)))


def test_config_validation_and_json():
    with pytest.raises(ValueError):
        ExperimentConfig("x", seed=-1)
    with pytest.raises(ValueError):
        ExperimentConfig("x", n_samples=0)
    c = ExperimentConfig("x", 5, 10, {"a": 1}, "o")
    assert ExperimentConfig.from_json(c.to_json()) == c
    with pytest.raises(ValueError):
        ExperimentConfig.from_json({"experiment": "x", "extra": 1})


def test_check_without_estimate_cannot_pass():
    with pytest.raises(ValueError):
        Check("c", 1.0, None, "+-0", PASS)
    with pytest.raises(ValueError):
        Check("c", 1.0, 1.0, "+-0", "MAYBE")


def test_failure_wrapped_and_no_partial_files(tmp_path, toy_experiments):
    with pytest.raises(ExperimentError, match="toy.boom.*seed 4"):
        run_experiment(ExperimentConfig("toy.boom", 4, out=str(tmp_path)))
    with pytest.raises(ExperimentError, match="width"):
        run_experiment(ExperimentConfig("toy.wide", 0, out=str(tmp_path)))
    assert not list(tmp_path.glob("*"))


def test_partial_outputs_removed_on_write_error(tmp_path, monkeypatch, toy_experiments):
    rec = run_experiment(ExperimentConfig("toy.ok", 0, out=str(tmp_path)), write=False)

    def bad(x):
        raise OSError("disk full")
    monkeypatch.setattr(runner, "_json_safe", bad)
    with pytest.raises(OSError):
        runner.save_record(rec)
    assert not list(tmp_path.glob("toy.ok*"))


def test_record_round_trip(tmp_path, toy_experiments):
    rec = run_experiment(ExperimentConfig("toy.ok", 2, out=str(tmp_path)))
    back = load_record(tmp_path / "toy.ok_seed2.json")
    assert back.config == rec.config and back.checks == rec.checks and back.verdict == PASS
    d = json.loads((tmp_path / "toy.ok_seed2.json").read_text())
    d["schema"] = "other/0"
    (tmp_path / "bad.json").write_text(json.dumps(d))
    with pytest.raises(ValueError, match="schema"):
        load_record(tmp_path / "bad.json")


def _rec(verdicts, schema="qlesim.run/1", crit=1):
    checks = [Check("c", 0.0, 0.0 if v != INCONCLUSIVE else None, "+-0", v) for v in verdicts]
    return RunRecord(ExperimentConfig("e"), crit, "0", 0.0, (), [], {}, checks, schema)


def test_report_verdicts():
    assert report([_rec([PASS])])["overall"] == PASS
    assert report([_rec([PASS]), _rec([FAIL], crit=2)])["overall"] == FAIL
    assert report([_rec([PASS]), _rec([INCONCLUSIVE], crit=2)])["overall"] == INCONCLUSIVE
    assert overall([]) == INCONCLUSIVE
    with pytest.raises(ValueError):
        report([])
    with pytest.raises(ValueError, match="schema"):
        report([_rec([PASS]), _rec([PASS], schema="x/2")])
    doc = report([_rec([PASS], crit=2), _rec([FAIL], crit=1)])
    assert [r["criterion"] for r in doc["rows"]] == [1, 2]
    assert "overall: FAIL" in report_text(doc)


def test_empty_estimate_is_inconclusive(tmp_path, toy_experiments):
    rec = run_experiment(ExperimentConfig("toy.empty", 0, out=str(tmp_path)))
    assert rec.verdict == INCONCLUSIVE
    assert report([rec])["overall"] == INCONCLUSIVE


def test_cli_run_and_report(tmp_path, capsys):
    out = str(tmp_path)
    assert cli.main(["levy", "-e", FAST, "--seed", "7", "--out", out]) == 0
    assert (tmp_path / f"{FAST}_seed7.csv").exists()
    assert cli.main(["report", "--out", out]) == 0
    txt = (tmp_path / "report.txt").read_text()
    assert FAST in txt and "overall: PASS" in txt
    assert json.loads((tmp_path / "report.json").read_text())["schema"] == "qlesim.report/1"
    capsys.readouterr()


def test_cli_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 11, "out": str(tmp_path / "o"), "experiment": "qle.hitting_rule"}))
    assert cli.main(["qle", "--config", str(cfg)]) == 0
    assert (tmp_path / "o" / "qle.hitting_rule_seed11.json").exists()
    # flags override the file
    assert cli.main(["qle", "--config", str(cfg), "--seed", "12"]) == 0
    assert (tmp_path / "o" / "qle.hitting_rule_seed12.json").exists()
    cfg.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(SystemExit):
        cli.main(["qle", "--config", str(cfg)])


def test_cli_rejects_unknown_subcommand_and_group_mismatch(tmp_path):
    with pytest.raises(SystemExit):
        cli.main(["nope"])
    with pytest.raises(SystemExit):
        cli.main(["qle", "-e", FAST, "--out", str(tmp_path)])


def test_cli_report_empty_dir(tmp_path):
    assert cli.main(["report", "--out", str(tmp_path)]) == 2
