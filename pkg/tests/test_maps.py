import itertools
from collections import Counter
from fractions import Fraction

import pytest

from qlesim import maps
from qlesim.maps import MULTI_EDGE, SIMPLE
from qlesim.maps.enumerate import rooted_sphere_triangulations
from qlesim.maps.laws import eden_law_map, marginal

ROOTED = {MULTI_EDGE: [1, 4, 24, 176, 1456], SIMPLE: [0, 1, 3, 13, 68]}
CONFIGS = {MULTI_EDGE: [4, 28, 240, 2288], SIMPLE: [0, 7, 30, 169]}


@pytest.mark.parametrize("cls", [MULTI_EDGE, SIMPLE])
def test_rooted_counts(cls):
    assert [len(rooted_sphere_triangulations(n, cls)) for n in range(3, 8)] == ROOTED[cls]


@pytest.mark.parametrize("cls", [MULTI_EDGE, SIMPLE])
def test_configuration_counts(cls):
    assert [len(maps.enumerate_triangulations(n, cls)) for n in range(3, 7)] == CONFIGS[cls]
    if cls == MULTI_EDGE:
        assert [maps.count_sphere_configurations(n) for n in range(3, 7)] == CONFIGS[cls]


def test_simple_small_cases():
    assert maps.enumerate_triangulations(3, SIMPLE) == []
    tris = maps.enumerate_triangulations(4, SIMPLE)
    # one rooted tetrahedron, every configuration on K4
    assert len({t.canonical().code for t in tris}) == len(tris) == 7
    for t in tris:
        assert t.n_vertices == 4 and t.n_triangles == 4 and t.underlying_simple()


def test_enumeration_bounds():
    with pytest.raises(ValueError, match="exhaustive"):
        maps.enumerate_triangulations(9)
    with pytest.raises(ValueError, match="exhaustive"):
        maps.enumerate_triangulations(2)
    with pytest.raises(ValueError):
        maps.enumerate_triangulations(4, "simple")


@pytest.mark.parametrize("cls", [MULTI_EDGE, SIMPLE])
def test_invariants_on_every_map(cls):
    for n in (4, 5):
        for t in maps.enumerate_triangulations(n, cls):
            V, E, F = t.n_vertices, t.n_edges, len(t.faces)
            assert V == n and V - E + F == 2
            assert sorted(len(f) for f in t.faces)[:2] == [2, 2]
            assert all(len(f) == 3 for k, f in enumerate(t.faces) if k not in (t.start_face, t.target_face))


def test_universe_distinct():
    for cls in (MULTI_EDGE, SIMPLE):
        u = maps.universe(5, cls)
        assert len(set(u)) == len(u) == CONFIGS[cls][2]


def test_disk_counts_match_gluing_small():
    for cls in (MULTI_EDGE, SIMPLE):
        for m in range(2, 6):
            for n in range(0, 3):
                assert maps.count_disk_triangulations(m, n, cls) == maps.brute_force_disk_count(m, n, cls), (cls, m, n)
    for m in range(2, 5):
        for n in range(0, 2):
            assert (maps.count_disk_triangulations(m, n, MULTI_EDGE, with_target=True)
                    == maps.brute_force_disk_count(m, n, MULTI_EDGE, with_target=True))


def test_disk_count_base_and_monotone():
    assert maps.count_disk_triangulations(2, 0) == 1
    assert maps.count_disk_triangulations(3, 0) == 1
    for cls in (MULTI_EDGE, SIMPLE):
        for m in range(3, 7):
            v = [maps.count_disk_triangulations(m, n, cls) for n in range(4)]
            assert all(b >= a for a, b in zip(v, v[1:])), (cls, m, v)
    with pytest.raises(ValueError):
        maps.count_disk_triangulations(1, 0)
    with pytest.raises(ValueError):
        maps.count_disk_triangulations(3, 0, "other")


def test_chain_transitions_normalised():
    todo, seen = [(0, 5)], set()
    while todo:
        s = todo.pop()
        if s in seen:
            continue
        seen.add(s)
        tr = maps.chain_transitions(*s)
        assert sum((t[4] for t in tr), Fraction(0)) == 1
        assert abs(sum(float(t[4]) for t in tr) - 1.0) <= 1e-15
        todo += [t[3] for t in tr if t[3] is not None]
    assert len(seen) > 10


def _all_colorings(t):
    return itertools.product((0, 1), repeat=t.n_vertices)


@pytest.mark.parametrize("n,cls", [(3, MULTI_EDGE), (4, MULTI_EDGE), (4, SIMPLE)])
def test_percolation_matches_direct_tracer(n, cls):
    for t in maps.universe(n, cls):
        for c in _all_colorings(t):
            tr = maps.percolation_exploration(t, c)
            assert tr.faces == maps.interface_faces(t, c)
            assert sum(nk.triangles for nk in tr.necklaces) == tr.triangles


def test_percolation_bad_coloring():
    t = maps.universe(4, SIMPLE)[0]
    with pytest.raises(ValueError, match="coloring"):
        maps.percolation_exploration(t, [0, 1])
    with pytest.raises(ValueError):
        maps.percolation_exploration(t)


def test_trace_rules_enforced():
    step = maps.PeelStep(0, 2, "end")
    with pytest.raises(ValueError):
        maps.ExplorationTrace(((0, 1), (0, 2)), (maps.PeelStep(0, 2, "new"), step))
    with pytest.raises(ValueError):
        maps.ExplorationTrace(((0, 2), (2, 1)), (maps.PeelStep(0, 2, "new"), step))
    with pytest.raises(ValueError):
        maps.ExplorationTrace(((0, 0),), (maps.PeelStep(0, 2, "new"),))


@pytest.mark.parametrize("cls", [MULTI_EDGE, SIMPLE])
def test_path_independence(cls):
    assert maps.path_independence(maps.universe(4, cls))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_multi_edge_explorations_agree_exactly(n):
    rows = maps.compare_explorations(n, MULTI_EDGE)
    assert {r.statistic for r in rows} == {"chain", "triangles", "necklaces", "reshuffle", "chain_mode"}
    for r in rows:
        assert r.tv == 0, r


def test_reshuffle_tv_matches_explicit_law():
    tris = maps.universe(4, MULTI_EDGE)
    ed = maps.eden_law(tris, with_positions=True)
    pc = maps.percolation_law(tris)
    explicit = maps.tv_distance(ed, maps.reshuffle_law(pc))
    assert explicit == maps.reshuffle_tv(maps.eden_law(tris), pc, len(tris)) == 0
    tris = maps.universe(4, SIMPLE)
    ed = maps.eden_law(tris, with_positions=True)
    pc = maps.percolation_law(tris)
    assert maps.tv_distance(ed, maps.reshuffle_law(pc)) == maps.reshuffle_tv(maps.eden_law(tris), pc, len(tris))


def test_comparison_json():
    import json
    rows = maps.compare_explorations(3, MULTI_EDGE)
    d = json.loads(maps.laws.comparisons_json(rows))
    assert d[0].keys() == {"class", "n", "statistic", "tv_distance_num", "tv_distance_den"}


def test_chain_mode():
    for s in range(50):
        tr = maps.eden_chain(5, s)
        assert tr.chain[0] == (0, 3) and tr.steps[-1].kind == "end"
    with pytest.raises(ValueError):
        maps.eden_chain(5, 0, SIMPLE)


@pytest.mark.parametrize("cls", [MULTI_EDGE, SIMPLE])
def test_assemble_round_trip(cls):
    for t in maps.universe(5, cls):
        for s in range(3):
            tr = maps.eden_exploration(t, s)
            back = maps.assemble(tr.record, cls)
            assert back == t
            assert maps.explore_at(back, [p for p, _ in tr.record]).record == tr.record


def test_assemble_rejects_bad_records():
    t = maps.universe(4, MULTI_EDGE)[3]
    rec = list(maps.eden_exploration(t, 0).record)
    with pytest.raises(ValueError):
        maps.assemble(rec[:-1])
    with pytest.raises(ValueError):
        maps.assemble([(5, rec[0][1])] + rec[1:])


def test_reshuffle_conserves_necklaces():
    for t in maps.universe(5, MULTI_EDGE)[:40]:
        tr = maps.percolation_exploration(t, seed=1)
        for s in range(3):
            new, tr2 = maps.reshuffle_necklaces(tr, s)
            assert Counter(tr2.necklaces) == Counter(tr.necklaces)
            assert tr2.necklace_sequence == tr.necklace_sequence
            new.validate()


def test_reshuffle_single_necklace():
    # one triangle between the 2-gons: only the rotation at each gluing changes
    seen = 0
    for t in maps.universe(3, MULTI_EDGE):
        tr = maps.eden_exploration(t, 0)
        if len(tr.necklaces) != 1:
            continue
        seen += 1
        outs = {maps.reshuffle_necklaces(tr, s)[0] for s in range(20)}
        ref = {maps.assemble(tuple(zip(pos, (d for _, d in tr.record))))
               for pos in itertools.product(*(range(d[1]) for _, d in tr.record))}
        assert t in ref and outs <= ref
    assert seen


def test_reshuffle_length_mismatch():
    a = maps.Necklace(2, 3)
    b = maps.Necklace(4, 5)
    with pytest.raises(ValueError, match="necklaces 0 and 1"):
        maps.reshuffle_necklaces([a, b], 0, cap=())


def test_dumps_loads_round_trip():
    for t in maps.universe(5, SIMPLE):
        s = maps.dumps(t)
        back = maps.loads(s)
        assert back == t and back.cls == t.cls
        assert back.nxt == t.nxt and back.twin == t.twin


def test_two_sided_meets_and_matches_exact():
    t = maps.universe(4, SIMPLE)[0]
    exact = maps.two_sided_exact(t)
    assert sum(exact.values()) == 1
    for s in range(200):
        r = maps.two_sided_eden_experiment(t, s)
        assert (r.passage_xy, r.steps_x, r.steps_y) in exact
    with pytest.raises(ValueError):
        maps.two_sided_eden_experiment(t, 0, "start", "start")


def test_passage_time_symmetric_under_automorphism():
    # on K4 with the 2-gons on opposite edges, an automorphism swaps them
    for t in maps.universe(4, SIMPLE):
        s, g = t.faces[t.start_face], t.faces[t.target_face]
        if {t.tail[d] for d in s} & {t.tail[d] for d in g}:
            continue
        assert maps.passage_time_law(t) == maps.passage_time_law(t.swapped())
        break
    else:
        pytest.fail("no configuration with disjoint 2-gons")


def test_eden_law_map_is_a_law():
    for t in maps.universe(4, MULTI_EDGE):
        law = eden_law_map(t)
        assert sum(law.values()) == 1
        ch = marginal(law, t.n_vertices, "chain")
        assert all(seq[0] == (0, t.n_vertices - 2) for seq in ch)
