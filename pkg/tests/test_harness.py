import csv
import io
import json

import numpy as np
import pytest

from lmdnf.dnf_core import Dnf, MembershipOracle, Term, format_dnf, read_dnf
from lmdnf.graph_engine import local_mixing_curve, read_cover, read_graph, write_graph
from lmdnf.harness import (
    CSV_COLUMNS,
    ExperimentSpec,
    derive_seed,
    find_plateau,
    gen_random_exact_dnf,
    gen_wacky_fixture,
    materialize_sat_graph,
    random_connected_graph,
    random_cover,
    random_partition_cover,
    run,
    run_one,
    two_expanders_fixture,
)
from lmdnf.harness.cli import main


# -- generators ------------------------------------------------------------------------


def test_gen_random_exact_dnf_examples():
    f = gen_random_exact_dnf(2, 2, 4, np.random.default_rng(0))
    assert set(f.terms) == {Term.of(1, 2), Term.of(1, -2), Term.of(-1, 2), Term.of(-1, -2)}
    for seed in range(20):
        g = gen_random_exact_dnf(9, 3, 4, np.random.default_rng(seed))
        assert g.is_exact(3) and g.s == 4 and len(set(g.terms)) == 4
    a = gen_random_exact_dnf(9, 3, 4, np.random.default_rng(5))
    b = gen_random_exact_dnf(9, 3, 4, np.random.default_rng(5))
    assert a == b
    with pytest.raises(ValueError):
        gen_random_exact_dnf(2, 2, 5, np.random.default_rng(0))


def test_wacky_fixture_shape():
    G, C = gen_wacky_fixture(2, (4, 6))
    assert G.is_nice() and G.is_connected()
    assert C.s == 2 and not C.disjoint  # the root is shared
    for A in C.sets:
        assert G.induced(A).is_connected()
    assert set(C.sets[0]) & set(C.sets[1]) == {0}
    with pytest.raises(ValueError):
        gen_wacky_fixture(2, (4, 12))


def test_wacky_fixture_plateau_near_half():
    G, C = gen_wacky_fixture(2, (4, 6))
    pstars = [r.p_star for r in local_mixing_curve(G, C, 0, 60)]
    plateau = find_plateau(pstars, 0.4, 0.6, 10)
    assert plateau is not None
    start, end = plateau
    assert end - start + 1 >= 10
    assert all(0.4 <= pstars[t] <= 0.6 for t in range(start, end + 1))
    assert pstars[0] == 0


def test_two_expanders_fixture():
    G, C = two_expanders_fixture(3)
    assert G.N == 16 and C.disjoint and G.is_nice()


def test_random_graph_and_cover_generators():
    rng = np.random.default_rng(0)
    for _ in range(20):
        G = random_connected_graph(rng, int(rng.integers(3, 10)))
        assert G.is_connected() and G.is_nice()
        C = random_cover(G, rng)
        assert C.s >= 2 and all(len(A) >= 2 and G.induced(A).is_connected() for A in C.sets)
        P = random_partition_cover(G, rng, 2)
        assert P.disjoint and P.is_sorted()


def test_materialize_sat_graph():
    f = Dnf(3, [Term.of(1)])
    G, pts = materialize_sat_graph(f)
    assert sorted(pts) == [1, 3, 5, 7]
    assert G.is_nice() and list(G.edge_degrees) == [2, 2, 2, 2]


def test_find_plateau():
    assert find_plateau([0, 0.5, 0.5, 0.5, 0.9], 0.4, 0.6, 3) == (1, 3)
    assert find_plateau([0.5, 0.5, 0.9, 0.5], 0.4, 0.6, 2) is None
    assert find_plateau([0, 0.5, 0.5, 0.5, 0.5], 0.4, 0.6, 2) == (1, 4)


# -- experiments -----------------------------------------------------------------------


def test_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec(task="dance")
    with pytest.raises(ValueError):
        ExperimentSpec(task="learn-smallk", n=4, k=5, s=1)
    with pytest.raises(ValueError):
        ExperimentSpec(task="graph-mix", reps=0)
    with pytest.raises(TypeError):
        ExperimentSpec.from_dict({"task": "graph-mix", "colour": 1})


def test_run_records_and_aggregates():
    spec = ExperimentSpec(task="learn-smallk", n=8, k=1, s=2, reps=4, seed=3)
    rep = run(spec)
    assert len(rep.records) == 4
    agg = rep.aggregates()
    assert agg["runs"] == 4
    assert agg["success_rate"] == sum(r.success for r in rep.records) / 4
    assert agg["mean_queries"] == sum(r.queries for r in rep.records) / 4
    assert agg["max_queries"] == max(r.queries for r in rep.records)
    assert [r.seed for r in rep.records] == [derive_seed(3, i) for i in range(4)]
    assert len(run(spec, reps=1).records) == 1


def test_csv_schema_and_single_row_replay():
    spec = ExperimentSpec(task="boost", n=8, k=2, s=2, weak="cheat", reps=3, seed=1)
    rep = run(spec)
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 4
    again = run_one(spec, int(rows[2][0]))
    assert again.csv_row()[:-1] == rep.records[1].csv_row()[:-1]


def test_reports_are_deterministic_modulo_timing():
    spec = ExperimentSpec(task="learn-exact", n=10, k=3, s=2, reps=2, seed=7, config={"walk": {"outer_len": 8, "inner_len_max": 8}})
    a, b = run(spec), run(spec)
    assert a.to_csv(with_timing=False) == b.to_csv(with_timing=False)
    assert a.to_json(with_timing=False) == b.to_json(with_timing=False)
    assert "seconds" not in a.to_csv(with_timing=False).splitlines()[0]


def test_failures_are_recorded_not_raised():
    spec = ExperimentSpec(task="learn-smallk", n=8, k=5, s=1, reps=2)
    rep = run(spec)
    assert not rep.all_completed
    assert all("exception" in r.detail for r in rep.records)
    assert rep.success_rate == 0


def test_report_write(tmp_path):
    rep = run(ExperimentSpec(task="graph-analyze", reps=3, seed=2))
    csv_path, json_path = rep.write(tmp_path)
    assert csv_path.name == "graph-analyze.csv"
    data = json.loads(json_path.read_text())
    assert data["aggregates"]["runs"] == 3 and len(data["records"]) == 3


# -- command line ------------------------------------------------------------------------


@pytest.fixture
def target(tmp_path):
    f = Dnf(8, [Term.of(1, 2), Term.of(-3, 4)])
    p = tmp_path / "f.dnf"
    p.write_text(format_dnf(f))
    return f, p


def test_cli_learners(tmp_path, target):
    f, p = target
    out = tmp_path / "h.dnf"
    assert main(["learn-exact", "--dnf", str(p), "--eps", "0.1", "--out", str(out), "--seed", "1"]) == 0
    h = read_dnf(out)
    report = json.loads((tmp_path / "h.dnf.report.json").read_text())
    assert report["error"] <= 0.1 and report["queries"] > 0
    assert h.n == 8
    assert main(["learn-smallk", "--dnf", str(p), "--out", str(out)]) == 0
    assert main(["boost", "--dnf", str(p), "--weak", "cheat", "--out", str(out)]) == 0
    assert json.loads((tmp_path / "h.dnf.report.json").read_text())["error"] <= 0.2


def test_cli_listdecode_with_config(tmp_path, target):
    _, p = target
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"walk": {"outer_len": 4, "inner_len_max": 4}, "outer_repeats": 2}))
    dist = tmp_path / "d.json"
    dist.write_text(json.dumps({"type": "product", "biases": [0.5] * 8}))
    out = tmp_path / "list.json"
    assert main(["listdecode", "--dnf", str(p), "--dist", str(dist), "--config", str(cfg), "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["queries"] > 0
    assert all({"term", "t", "ell", "repeat"} <= set(row) for row in data["terms"])


def test_cli_graph_commands(tmp_path):
    g, c = tmp_path / "g.txt", tmp_path / "c.txt"
    assert main(["gen-wacky", "--depth", "2", "--dims", "2", "4", "--graph-out", str(g), "--cover-out", str(c)]) == 0
    G = read_graph(g)
    assert read_cover(c, G).s == 2
    out = tmp_path / "mix.csv"
    assert main(["graph", "mix", "--graph", str(g), "--cover", str(c), "--t-max", "12", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,index,p_star" and len(lines) == 14
    small = tmp_path / "small.txt"
    write_graph(G.induced(range(6)).make_nice(), small)
    rep = tmp_path / "an.json"
    assert main(["graph", "analyze", "--graph", str(small), "--out", str(rep)]) == 0
    data = json.loads(rep.read_text())
    assert data["N"] == 6 and "phi" in data and len(data["spectrum"]) == 6


def test_cli_run_exit_codes(tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"task": "learn-smallk", "n": 8, "k": 1, "s": 2, "reps": 2}))
    assert main(["run", "--spec", str(good), "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "learn-smallk.csv").exists()
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"task": "learn-smallk", "n": 8, "k": 5, "s": 1}))
    assert main(["run", "--spec", str(bad), "--out", str(tmp_path / "o"), "--stem", "bad"]) == 1
    seed = int((tmp_path / "o" / "learn-smallk.csv").read_text().splitlines()[1].split(",")[0])
    assert main(["run", "--spec", str(good), "--out", str(tmp_path / "p"), "--only-seed", str(seed)]) == 0
    a = (tmp_path / "o" / "learn-smallk.csv").read_text().splitlines()[1].rsplit(",", 1)[0]
    b = (tmp_path / "p" / "learn-smallk.csv").read_text().splitlines()[1].rsplit(",", 1)[0]
    assert a == b


def test_cli_gen_dnf(tmp_path):
    out = tmp_path / "r.dnf"
    assert main(["gen-dnf", "--n", "6", "--k", "2", "--s", "3", "--seed", "4", "--out", str(out)]) == 0
    f = read_dnf(out)
    assert f.is_exact(2) and f.s == 3
    assert MembershipOracle(f).query(0) in (0, 1)


def test_cli_reports_bad_input_without_traceback(tmp_path, target, capsys):
    _, p = target
    assert main(["learn-smallk", "--dnf", str(p), "--k", "9", "--out", str(tmp_path / "h.dnf")]) == 2
    assert "error" in capsys.readouterr().err
    assert main(["learn-exact", "--dnf", str(tmp_path / "missing.dnf"), "--out", str(tmp_path / "h.dnf")]) == 2
