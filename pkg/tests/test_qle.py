import json

import numpy as np
import pytest
from scipy import stats

from qlesim import levy, qle, sphere
from qlesim.levy import CadlagPath, Excursion, StableLaw
from qlesim.qle import MeetingConfig, QleConfig
from qlesim.rng import stream

LAW = StableLaw()


def _exc(seed, n=200, T=2.0):
    return levy.walk_to_excursion(LAW, levy.sample_normalized_excursions(LAW, n, 1, seed)[0], T)


def test_config_and_state_invariants():
    with pytest.raises(ValueError):
        QleConfig(0.0)
    with pytest.raises(ValueError):
        qle.QleState(1.0, 1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        qle.QleState(-1.0, 0.0, 0.0, 0.0)
    qle.QleState(0.0, 0.0, 1.0, 1.0)


def test_single_segment_matches_encoding():
    e = _exc(1)
    rec = qle.qle_delta_run(e, QleConfig(delta=10.0, seed=4))
    assert len(rec.states) == 1
    s = sphere.encode_sphere(e, 4)
    assert rec.ledger() == [(b.time, b.length) for b in s.bubbles_by_swallow_time()]


def test_ledger_independent_of_delta():
    for seed in range(20):
        e = _exc(seed)
        ref = qle.qle_delta_run(e, QleConfig(delta=0.5, seed=seed)).ledger()
        for d in (0.01, 0.1, 3.0):
            assert qle.qle_delta_run(e, QleConfig(delta=d, seed=seed)).ledger() == ref
        sizes = list(e.path.jumps[:, 1])
        assert [x for _, x in ref] == sizes[::-1]


def test_snapshots_follow_reversed_excursion():
    e = _exc(2)
    rec = qle.qle_delta_run(e, QleConfig(delta=0.1, seed=0))
    bp = e.reversed().path
    for st in rec.states:
        assert st.boundary_length == float(bp.at(st.qnt_elapsed))
    qd = [st.qd_elapsed for st in rec.states]
    assert all(b > a for a, b in zip(qd, qd[1:]))


def test_tips_uniform_over_runs():
    u = []
    for i in range(10_000):
        e = _exc(stream(7, "e", i), n=20, T=1.0)
        rec = qle.qle_delta_run(e, QleConfig(delta=0.25, seed=i))
        u += [s.tip / s.boundary_length for s in rec.states if s.boundary_length > 0]
    assert stats.kstest(u, "uniform").pvalue > 0.01


def test_clocks_do_not_depend_on_tips():
    e = _exc(3)
    a = qle.qle_delta_run(e, QleConfig(delta=0.1, seed=1))
    b = qle.qle_delta_run(e, QleConfig(delta=0.1, seed=2))
    assert [s.qd_elapsed for s in a.states] == [s.qd_elapsed for s in b.states]
    assert [s.tip for s in a.states] != [s.tip for s in b.states]
    assert a.total_distance == b.total_distance


def test_distance_clock_endpoints():
    e = _exc(5)
    rec = qle.qle_delta_run(e, QleConfig(delta=0.2))
    assert qle.distance_clock(rec, 0.0) == 0.0
    d = sphere.quantum_distance(sphere.encode_sphere(e, 0))
    assert abs(qle.distance_clock(rec, e.lifetime) - d) < 1e-10
    with pytest.raises(ValueError):
        qle.distance_clock(rec, -0.1)
    with pytest.raises(ValueError):
        qle.distance_clock(rec, e.lifetime * 1.01)


def test_distance_clock_strictly_increasing():
    e = _exc(6)
    rec = qle.qle_delta_run(e, QleConfig(delta=0.2))
    s = [qle.distance_clock(rec, t) for t in np.linspace(0, e.lifetime, 101)]
    assert all(b > a for a, b in zip(s, s[1:]))


def test_distance_clock_constant_process():
    # X = c on the interior: s advances at rate 1 / c; the zero end cells add h * edge / c
    n, c = 100, 2.0
    h = 1.0 / n
    t = np.linspace(0.0, 1.0, n + 1)
    x = np.full(n + 1, c)
    x[0] = x[-1] = 0.0
    rec = qle.qle_delta_run(Excursion(CadlagPath(t, x), 1.0), QleConfig(delta=0.5))
    edge = 1.0 / (1.0 - 1.0 / LAW.alpha)
    for tt in (0.25, 0.5, 0.75):
        assert qle.distance_clock(rec, tt) == pytest.approx(tt / c + h * (edge - 1) / c, abs=1e-12)
    assert rec.total_distance == pytest.approx(1.0 / c + 2 * h * (edge - 1) / c, abs=1e-12)


def test_hitting_probability():
    assert qle.hitting_probability(2.0, 1.0) == 0.5
    assert qle.hitting_probability(2.0, 0.0) == 0.0
    assert qle.hitting_probability(2.0, 3.0) == 1.0
    assert qle.hitting_probability(2.0, 2.0) == 1.0
    with pytest.raises(ValueError):
        qle.hitting_probability(0.0, 1.0)
    with pytest.raises(ValueError):
        qle.hitting_probability(1.0, -0.1)


def test_complement_identity_passes():
    r = qle.check_complement_lemma(lambda d: 1.0 - d, D=1.0)
    assert r.passed and r.hypothesis_met and r.deviation == 0.0 and r.witness is None


def test_complement_square_not_uniform():
    r = qle.check_complement_lemma(lambda d: 1.0 - d * d, D=1.0)
    assert not r.hypothesis_met and not r.passed


def test_complement_flat_witness():
    D = 2.0
    d = np.linspace(0, D, 2001)
    f = np.where(d < 0.8, D - d, np.where(d < 1.2, D - 0.8, D - d))
    f = np.minimum.accumulate(f)
    r = qle.check_complement_lemma(f, D=D)
    assert not r.passed
    assert 0.8 <= r.witness <= 1.2


def test_complement_rejects_non_monotone():
    with pytest.raises(ValueError):
        qle.check_complement_lemma(lambda d: d, D=1.0)
    with pytest.raises(ValueError):
        qle.check_complement_lemma(np.ones(5))


def test_meeting_bookkeeping_examples():
    rec = qle.qle_delta_run(_exc(8), QleConfig(delta=0.5))
    D = rec.total_distance
    assert qle.meeting_bookkeeping(rec, MeetingConfig.from_uniform(0.0, D)) == (0.0, D)
    assert qle.meeting_bookkeeping(rec, MeetingConfig.from_uniform(1.0, D)) == (D, 0.0)
    tau, sb = qle.meeting_bookkeeping(rec, MeetingConfig.from_uniform(0.3, D))
    assert tau + sb == D
    with pytest.raises(ValueError):
        qle.meeting_bookkeeping(rec, MeetingConfig.from_uniform(0.3, D * 2))
    with pytest.raises(ValueError):
        MeetingConfig(1.5, 0.0, 1.0)
    with pytest.raises(ValueError):
        MeetingConfig(0.5, 2.0, 1.0)


def test_sigma_bar_uniform():
    r = stream(9, "U")
    out = []
    for i in range(10_000):
        rec = qle.qle_delta_run(_exc(stream(9, "e", i), n=10, T=1.0), QleConfig(delta=1.0, seed=i))
        D = rec.total_distance
        tau, sb = qle.meeting_bookkeeping(rec, MeetingConfig.from_uniform(r.uniform(), D))
        out.append(sb / D)
    assert stats.kstest(out, "uniform").pvalue > 0.01


def test_record_json_round_trip():
    rec = qle.qle_delta_run(_exc(10), QleConfig(delta=0.3, seed=2))
    d = json.loads(rec.to_json())
    assert d["delta"] == 0.3 and d["total_distance"] == rec.total_distance
    assert len(d["states"]) == len(rec.states) and len(d["bubbles"]) == len(rec.bubbles)
    assert [b["length"] for b in d["bubbles"]] == [b.length for b in rec.bubbles]
    assert all(0 <= b["segment"] < len(rec.states) for b in d["bubbles"])
