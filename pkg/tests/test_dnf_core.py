import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmdnf.dnf_core import (
    Dnf,
    MembershipOracle,
    SampleDistribution,
    TargetTooSparse,
    Term,
    all_terms,
    assignment,
    count_terms,
    dedup,
    format_dnf,
    induced_term,
    is_weak_term,
    largest_common_term,
    largest_common_terms_batch,
    parse_dnf,
    read_distribution,
    read_dnf,
    rejection_sample,
    restrict_term,
    sample_term_satisfying,
    sat_distance,
    term_distance,
    write_distribution,
    write_dnf,
)

A = assignment


@st.composite
def terms(draw, n=6, max_width=None):
    width = draw(st.integers(0, max_width if max_width is not None else n))
    vs = draw(st.permutations(range(1, n + 1)))[:width]
    signs = draw(st.lists(st.booleans(), min_size=width, max_size=width))
    return Term(tuple(v if s else -v for v, s in zip(vs, signs)))


# -- terms ----------------------------------------------------------------------------


def test_term_is_canonical_and_hashable():
    assert Term.of(3, -1, 2) == Term.of(-1, 2, 3)
    assert Term.of(3, -1, 2).literals == (-1, 2, 3)
    assert len({Term.of(1, 2), Term.of(2, 1)}) == 1
    assert str(Term.of(1, -2)) != str(Term.of(1, 2))


def test_term_rejects_conflicts_and_repeats():
    with pytest.raises(ValueError):
        Term.of(1, -1)
    with pytest.raises(ValueError):
        Term.of(2, 2)
    with pytest.raises(ValueError):
        Term.of(0)


def test_dnf_eval_examples():
    f = Dnf(2, [Term.of(1, 2)])
    assert f.eval(A("11")) == 1
    assert f.eval(A("10")) == 0
    g = Dnf(2, [Term.of(1, 2), Term.of(-1, -2)])
    assert g.eval(A("00")) == 1


def test_dnf_eval_length_mismatch():
    with pytest.raises(ValueError):
        Dnf(2, [Term.of(1, 3)])
    with pytest.raises(ValueError):
        Dnf(2, [Term.of(1)]).eval(1 << 2)


def test_empty_dnf_is_constant_zero():
    f = Dnf(3, [])
    assert f.s == 0
    assert not f.eval_batch(np.arange(8)).any()


def test_exact_k_predicate():
    assert Dnf(4, [Term.of(1, 2), Term.of(-3, 4)]).is_exact(2)
    assert not Dnf(4, [Term.of(1, 2), Term.of(3)]).is_exact()
    assert Dnf(4, [Term.of(1, 2), Term.of(3)]).k == 0


@given(st.lists(terms(), min_size=1, max_size=4))
@settings(max_examples=60, deadline=None)
def test_eval_batch_matches_eval(ts):
    f = Dnf(6, ts)
    xs = np.arange(64)
    assert list(f.eval_batch(xs)) == [bool(f.eval(int(x))) for x in xs]


def test_term_distance_examples():
    assert term_distance(Term.of(1, 2, 3), Term.of(1, 2, 4)) == 1
    assert term_distance(Term.of(1, 2), Term.of(1, 2, 3, 4)) == 0
    assert term_distance(Term.of(1), Term.of(-1)) == 1


@given(terms(), terms())
def test_term_distance_symmetric_and_zero_iff_containment(t1, t2):
    d = term_distance(t1, t2)
    assert d == term_distance(t2, t1)
    s1, s2 = set(t1.literals), set(t2.literals)
    assert d == min(len(s1 - s2), len(s2 - s1))
    assert (d == 0) == (s1 <= s2 or s2 <= s1)
    if t1.width == t2.width:
        assert d == len(s1 - s2) == len(s2 - s1)


def test_sat_distance_examples():
    assert sat_distance(A("000"), [Term.of(1, 2)]) == 2
    assert sat_distance(A("110"), [Term.of(1, 2)]) == 0
    assert sat_distance(A("000"), [Term.of(1, 2), Term.of(-1, 3)]) == 1
    assert sat_distance(A("000"), []) == math.inf


@given(st.lists(terms(n=7), min_size=1, max_size=4), st.integers(0, 127))
@settings(max_examples=80, deadline=None)
def test_sat_distance_equals_bruteforce_hamming(ts, x):
    f = Dnf(7, ts)
    sat = [y for y in range(128) if f.eval(y)]
    brute = min(bin(x ^ y).count("1") for y in sat)
    assert sat_distance(x, ts) == brute
    assert (sat_distance(x, ts) == 0) == bool(f.eval(x))


def test_induced_and_restricted_terms():
    assert induced_term(A("101"), {1, 3}) == Term.of(1, 3)
    assert induced_term(A("101"), set()) == Term.of()
    assert induced_term(A("010"), {1, 2, 3}) == Term.of(-1, 2, -3)
    assert restrict_term(Term.of(1, -2, 3), {2, 3}) == Term.of(-2, 3)
    assert restrict_term(Term.of(1), {2}) == Term.of()
    assert restrict_term(Term.of(1, 2), {1, 2}) == Term.of(1, 2)


def test_largest_common_term_examples():
    assert largest_common_term([A("110"), A("111")], 3) == Term.of(1, 2)
    assert largest_common_term([A("101")], 3) == Term.of(1, -2, 3)
    assert largest_common_term([A("000"), A("111")], 3) == Term.of()
    with pytest.raises(ValueError):
        largest_common_term([], 3)


@given(st.lists(st.integers(0, 255), min_size=1, max_size=6))
def test_largest_common_term_is_maximal(points):
    t = largest_common_term(points, 8)
    assert all(t.satisfied_by(p) for p in points)
    for v in range(1, 9):
        if v in t.variables:
            continue
        for lit in (v, -v):
            longer = Term(t.literals + (lit,))
            assert not all(longer.satisfied_by(p) for p in points)


def test_largest_common_terms_batch_matches_scalar():
    rng = np.random.default_rng(3)
    pts = rng.integers(0, 1 << 9, size=(20, 5))
    masks, values = largest_common_terms_batch(pts, 9)
    for row, m, v in zip(pts, masks, values):
        assert Term.from_mask(int(m), int(v)) == largest_common_term(list(row), 9)


def test_all_terms_and_count():
    ts = list(all_terms(3, 2))
    assert len(ts) == count_terms(3, 2) == 12
    assert len(set(ts)) == 12
    assert all(t.width == 2 for t in ts)


def test_dedup_keeps_first_occurrence():
    assert dedup([Term.of(2), Term.of(1), Term.of(2)]) == [Term.of(2), Term.of(1)]


# -- formats ------------------------------------------------------------------------------


def test_dnf_text_roundtrip(tmp_path):
    f = Dnf(5, [Term.of(1, -3), Term.of(2, 5)])
    text = format_dnf(f)
    assert text.splitlines()[0] == "5 2 2"
    assert parse_dnf(text) == f
    write_dnf(f, tmp_path / "f.dnf")
    assert read_dnf(tmp_path / "f.dnf") == f


def test_dnf_text_header_mismatch():
    with pytest.raises(ValueError):
        parse_dnf("3 2 2\n1 2\n")


def test_distribution_json_roundtrip(tmp_path):
    for d in (
        SampleDistribution.uniform(3),
        SampleDistribution.product([0.1, 0.5, 1.0]),
        SampleDistribution.explicit(2, [1, 3], [0.25, 0.75]),
    ):
        write_distribution(d, tmp_path / "d.json")
        assert read_distribution(tmp_path / "d.json").to_json() == d.to_json()


def test_distribution_validation():
    with pytest.raises(ValueError):
        SampleDistribution.product([0.5, 1.5])
    with pytest.raises(ValueError):
        SampleDistribution.explicit(2, [0, 1], [0.5, 0.6])


# -- sampling -----------------------------------------------------------------------------


def test_sample_examples():
    rng = np.random.default_rng(0)
    assert set(SampleDistribution.explicit(2, [A("11")], [1.0]).sample(rng, 50)) == {A("11")}
    assert set(SampleDistribution.product([0.0] * 4).sample(rng, 50)) == {0}
    xs = SampleDistribution.uniform(2).sample(rng, 10_000)
    freq = np.bincount(xs, minlength=4) / len(xs)
    assert np.all(np.abs(freq - 0.25) <= 0.02)


def test_sample_is_deterministic_given_seed():
    d = SampleDistribution.product([0.3, 0.6, 0.9])
    a = d.sample(np.random.default_rng(7), 100)
    b = d.sample(np.random.default_rng(7), 100)
    assert np.array_equal(a, b)


def test_table_is_exact():
    pts, probs = SampleDistribution.product([0.25, 1.0]).table()
    table = dict(zip(pts.tolist(), probs.tolist()))
    assert table[A("01")] == pytest.approx(0.75)
    assert table[A("11")] == pytest.approx(0.25)
    assert abs(probs.sum() - 1) < 1e-12


def test_sample_term_satisfying_examples():
    rng = np.random.default_rng(1)
    assert set(sample_term_satisfying(Term.of(1, 2), 2, rng, 100)) == {A("11")}
    xs = sample_term_satisfying(Term.of(1), 2, rng, 10_000)
    assert set(xs) <= {A("10"), A("11")}
    assert abs(np.mean(xs == A("11")) - 0.5) <= 0.02


@given(st.lists(terms(n=8, max_width=4), min_size=1, max_size=3), st.integers(0, 1000))
@settings(max_examples=40, deadline=None)
def test_satisfier_of_a_true_term_satisfies_f(ts, seed):
    f = Dnf(8, ts)
    rng = np.random.default_rng(seed)
    for t in ts:
        xs = sample_term_satisfying(t, 8, rng, 20)
        assert f.eval_batch(xs).all()


def test_rejection_sample_sparse():
    d = SampleDistribution.uniform(10)
    o = MembershipOracle(Dnf(10, [Term.of(*range(1, 11))]))
    with pytest.raises(TargetTooSparse):
        rejection_sample(d, o.query_batch, 1, np.random.default_rng(0), max_draws=50)


# -- oracle -------------------------------------------------------------------------------


def test_query_count_exact():
    o = MembershipOracle(Dnf(3, [Term.of(1)]))
    assert o.query_count == 0
    o.query(1)
    o.query(0)
    o.query_batch(np.arange(8))
    assert o.query_count == 10
    assert o.query(1) == 1 and o.query(0) == 0


def test_query_rejects_wide_assignment():
    o = MembershipOracle(Dnf(3, [Term.of(1)]))
    with pytest.raises(ValueError):
        o.query(8)


# -- weak-term test -----------------------------------------------------------------------


def test_is_weak_term_examples():
    rng = np.random.default_rng(0)
    f = Dnf(2, [Term.of(1)])
    d = SampleDistribution.uniform(2)
    assert is_weak_term(Term.of(1), MembershipOracle(f), d, 0.25, 1, rng).accept
    assert not is_weak_term(Term.of(-1), MembershipOracle(f), d, 0.25, 1, rng).accept
    g = Dnf(4, [Term.of(1, 2), Term.of(3, 4)])
    dec = is_weak_term(Term.of(1, 2), MembershipOracle(g), SampleDistribution.uniform(4), 0.1, 2, rng)
    assert dec.accept
    assert abs(dec.p_given_positive - 4 / 7) < 1 / 16


def test_is_weak_term_sparse_target():
    f = Dnf(12, [Term.of(*range(1, 13))])
    with pytest.raises(TargetTooSparse):
        is_weak_term(Term.of(1), MembershipOracle(f), SampleDistribution.uniform(12), 0.1, 1, np.random.default_rng(0), positive_floor=0.01)
