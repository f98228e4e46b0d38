"""Acceptance suite: one registered experiment per criterion, default parameters, seed 0.

Each test prints one PASS/FAIL line per criterion (and the individual checks
beneath it) and asserts that every check passed.  Tolerances are pinned in
the experiments and echoed in the printed lines:

 1  CSBP Laplace transform, 3 SE, 2e5 paths, < 120 s
 2  extinction law, 3 binomial SE per (y0, t), < 120 s
 3  exponential integral, 3 SE, < 120 s
 4  distance tail slope -2 +- 0.15
 5  max tail slope -1 +- 0.1
 6  lifetime tail slope -2/3 +- 0.05
 7  dyadic jump ratio 2^{3/2} +- 5 %
 8  SIMPLE Eden vs percolation TV exactly 0 for n in {4, 5, 6}, < 30 min
 9  disk counts equal brute-force gluing for m <= 6, n <= 3
10  QLE bookkeeping (exact ledgers, KS p > 0.01, 1e-10 / 1e-12 clocks)
11  complement lemma suite
12  hitting rule exact on a grid
13  coordinate change, gamma = 0 control < 1 %, median < 10 % over 50 fields, < 20 min
14  u_t semigroup 1e-10 and ODE 1e-6, < 1 s
"""
import pytest

from qlesim.harness.config import PASS, ExperimentConfig
from qlesim.harness.experiments import REGISTRY
from qlesim.harness.runner import run_experiment

CRITERIA = sorted((e.criterion, e.id) for e in REGISTRY.values() if 1 <= e.criterion <= 14)


@pytest.fixture(scope="module")
def out_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("acceptance")


@pytest.mark.parametrize("criterion,eid", CRITERIA, ids=[f"c{c:02d}-{e}" for c, e in CRITERIA])
def test_criterion(criterion, eid, out_dir, capsys):
    rec = run_experiment(ExperimentConfig(eid, 0, out=str(out_dir)))
    with capsys.disabled():
        print(f"\n[{rec.verdict}] criterion {criterion:2d} {eid} ({rec.wall_time:.1f} s)")
        for c in rec.checks:
            print(f"    [{c.verdict}] {c.claim}: estimate {c.estimate} target {c.target} tol {c.tolerance}"
                  + (f" ({c.detail})" if c.detail else ""))
    failed = [c.claim for c in rec.checks if c.verdict != PASS]
    assert rec.verdict == PASS, f"criterion {criterion} ({eid}) not met: {failed}"


def test_all_criteria_registered():
    assert [c for c, _ in CRITERIA] == list(range(1, 15))
