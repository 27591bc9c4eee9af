import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmdnf.dnf_core import Dnf, MembershipOracle, SampleDistribution, TargetTooSparse, Term, assignment, largest_common_term
from lmdnf.graph_engine import empirical_tv, point_mass, walk_distribution
from lmdnf.harness import gen_random_exact_dnf, materialize_sat_graph
from lmdnf.walker import (
    NotSatisfying,
    SatWalkOracle,
    WalkConfig,
    default_samples_per_probe,
    generate_list_of_terms,
    list_decode,
    sat_neighbors,
    step_nice,
    step_uniform,
    walk,
    walk_endpoints,
)

A = assignment


def W(f: Dnf) -> SatWalkOracle:
    return SatWalkOracle(MembershipOracle(f))


def test_sat_neighbors_examples():
    w = W(Dnf(2, [Term.of(1, 2)]))
    assert sat_neighbors(w, A("11"), validate=False) == set()
    assert w.query_count == 2
    assert sat_neighbors(w, A("11")) == set()
    assert w.query_count == 5
    assert sat_neighbors(W(Dnf(2, [Term.of(1)])), A("11")) == {2}
    taut = Dnf(3, [Term.of(1), Term.of(-1)])
    assert sat_neighbors(W(taut), A("000")) == {1, 2, 3}


def test_rejects_unsatisfying_start():
    w = W(Dnf(2, [Term.of(1)]))
    with pytest.raises(NotSatisfying):
        sat_neighbors(w, A("01"))
    with pytest.raises(NotSatisfying):
        step_nice(w, A("01"), np.random.default_rng(0))
    with pytest.raises(NotSatisfying):
        walk(w, A("00"), 3, np.random.default_rng(0))


def test_step_nice_examples():
    rng = np.random.default_rng(0)
    iso = Dnf(2, [Term.of(1, 2)])
    assert {step_nice(W(iso), A("11"), rng) for _ in range(50)} == {A("11")}
    w = W(Dnf(2, [Term.of(1)]))
    nxt = [step_nice(w, A("11"), rng) for _ in range(10_000)]
    assert set(nxt) == {A("11"), A("10")}
    assert abs(np.mean(np.array(nxt) == A("10")) - 0.5) <= 0.02


def test_step_uniform_stays_satisfying():
    rng = np.random.default_rng(1)
    f = Dnf(4, [Term.of(1, 2)])
    w = W(f)
    y = A("1100")
    for _ in range(200):
        y = step_uniform(w, y, rng)
        assert f.eval(y)


def test_walk_accounting_and_determinism():
    f = Dnf(5, [Term.of(1, -2), Term.of(3, 4)])
    w = W(f)
    y = A("10000")
    assert walk(w, y, 0, np.random.default_rng(0)) == y
    before = w.query_count
    end, path = walk(w, y, 7, np.random.default_rng(3), record=True)
    assert w.query_count - before == 7 * 5 + 1
    assert len(path) == 8 and end == walk(W(f), y, 7, np.random.default_rng(3))


@given(st.integers(0, 10_000), st.sampled_from(["nice", "uniform"]))
@settings(max_examples=25, deadline=None)
def test_endpoints_always_satisfy(seed, mode):
    rng = np.random.default_rng(seed)
    f = gen_random_exact_dnf(6, 2, 3, rng)
    y = next(x for x in range(64) if f.eval(x))
    ends = walk_endpoints(W(f), y, 6, 200, rng, mode)
    assert f.eval_batch(ends).all()


def test_walker_matches_exact_chain():
    rng = np.random.default_rng(4)
    f = gen_random_exact_dnf(4, 2, 2, rng)
    G, pts = materialize_sat_graph(f)
    index = {x: i for i, x in enumerate(pts)}
    y = pts[0]
    for t in (1, 5, 20):
        ends = walk_endpoints(W(f), y, t, 100_000, rng)
        exact = walk_distribution(G, point_mass(G.N, index[y]), t)
        assert empirical_tv(np.array([index[int(e)] for e in ends]), exact) <= 0.02


def test_walk_config_validation():
    assert default_samples_per_probe(2) == 2
    assert default_samples_per_probe(10) == 7
    assert WalkConfig().probes(10) == 7
    assert WalkConfig(samples_per_probe=3).probes(10) == 3
    with pytest.raises(ValueError):
        WalkConfig(outer_len=0)
    with pytest.raises(ValueError):
        WalkConfig(samples_per_probe=1)
    with pytest.raises(ValueError):
        WalkConfig(mode="fast")
    with pytest.raises(ValueError):
        WalkConfig.from_dict({"bogus": 1})


def test_generate_list_accounting():
    f = Dnf(6, [Term.of(1, 2, 3)])
    cfg = WalkConfig(outer_len=1, inner_len_max=1, samples_per_probe=2)
    res = generate_list_of_terms(W(f), A("111000"), cfg, np.random.default_rng(0))
    assert len(res.terms) <= 1


def test_generate_list_terms_are_audit_consistent():
    rng = np.random.default_rng(2)
    f = gen_random_exact_dnf(8, 3, 2, rng)
    y = next(x for x in range(256) if f.eval(x))
    cfg = WalkConfig(outer_len=8, inner_len_max=8, samples_per_probe=3)
    res = generate_list_of_terms(W(f), y, cfg, rng)
    assert len(res.terms) <= 64
    assert len(set(res.terms)) == len(res.terms)
    for d in res.discoveries:
        assert len(d.endpoints) == 3
        assert largest_common_term(list(d.endpoints), 8) == d.term
        assert f.eval_batch(np.array(d.endpoints)).all()
        assert 1 <= d.t <= 8 and 1 <= d.ell <= 8


def test_generate_list_is_seed_deterministic():
    f = Dnf(6, [Term.of(1, 2), Term.of(-3, 4)])
    cfg = WalkConfig(outer_len=6, inner_len_max=6)
    a = generate_list_of_terms(W(f), A("110000"), cfg, np.random.default_rng(9))
    b = generate_list_of_terms(W(f), A("110000"), cfg, np.random.default_rng(9))
    assert a.terms == b.terms and a.queries == b.queries


def test_single_term_is_recovered():
    T = Term.of(1, -3, 5, 8)
    f = Dnf(8, [T])
    cfg = WalkConfig(outer_len=16, inner_len_max=16)
    hits = 0
    for seed in range(50):
        rng = np.random.default_rng(seed)
        y = int(rng.integers(0, 256)) & ~T.mask | T.value
        res = generate_list_of_terms(W(f), y, cfg, rng)
        assert all(set(T.literals) <= set(t.literals) for t in res.terms)
        hits += T in res.terms
    assert hits >= 45


def test_list_decode_point_mass_start():
    f = Dnf(6, [Term.of(1)])
    d = SampleDistribution.point_mass(6, (1 << 6) - 1)
    res = list_decode(W(f), d, WalkConfig(outer_len=16, inner_len_max=16), 4, np.random.default_rng(0))
    assert all(1 in t.literals for t in res.terms)
    assert Term.of(1) in res.terms
    assert len(res.terms) <= 4 * 16 * 16
    assert len(res.discoveries) == len(res.terms)
    assert {d.repeat for d in res.discoveries} <= set(range(4))


def test_list_decode_sparse_target():
    f = Dnf(12, [Term.of(*range(1, 13))])
    with pytest.raises(TargetTooSparse):
        list_decode(W(f), SampleDistribution.uniform(12), WalkConfig(), 1, np.random.default_rng(0), max_start_draws=100)
