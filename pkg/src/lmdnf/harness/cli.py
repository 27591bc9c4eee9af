"""Command line entry point: ``lmdnf <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from ..dnf_core import MembershipOracle, SampleDistribution, format_dnf, read_distribution, read_dnf
from ..graph_engine import (
    BRUTEFORCE_MAX_N,
    cheeger_interval,
    local_mixing_curve,
    mixing_time_exact,
    normalized_laplacian_spectrum,
    phi_graph_bruteforce,
    read_cover,
    read_graph,
    stationary,
    write_cover,
    write_graph,
)
from ..learner import (
    BoostingFailed,
    LearnerConfig,
    cheat_weak_learner,
    dnf_learn,
    estimate_error,
    learn_small_k,
    plugin_weak_learner,
)
from ..walker import SatWalkOracle, WalkConfig, list_decode
from .experiments import ExperimentSpec, run, run_one
from .fixtures import gen_random_exact_dnf, gen_wacky_fixture


def _load_config(path):
    if not path:
        return {}
    with open(path) as fh:
        return json.load(fh)


def _dist(args, n):
    return read_distribution(args.dist) if args.dist else SampleDistribution.uniform(n)


def _write(path, text):
    if path:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# -- graph ------------------------------------------------------------------------------


def cmd_graph_analyze(args) -> int:
    G = read_graph(args.graph)
    spec = normalized_laplacian_spectrum(G)
    lam2 = spec.lambda2 if G.N > 1 else float("nan")
    report = {
        "N": G.N,
        "edges": G.num_edges,
        "nice": G.is_nice(),
        "connected": G.is_connected(),
        "d_max": G.d_max,
        "spectrum": [round(float(x), 12) for x in spec.eigenvalues],
        "lambda2": lam2,
        "cheeger_interval": cheeger_interval(lam2),
    }
    if 2 <= G.N <= BRUTEFORCE_MAX_N:
        report["phi"] = str(phi_graph_bruteforce(G))
    if G.is_connected():
        report["stationary_min"] = float(stationary(G).min())
        if G.N <= 200:
            report["mixing_time"] = mixing_time_exact(G, args.eps)
    if args.cover:
        C = read_cover(args.cover, G)
        report["cover"] = {"s": C.s, "disjoint": C.disjoint, "sizes": C.sizes()}
        if all(2 <= len(A) <= BRUTEFORCE_MAX_N for A in C.sets):
            report["cover"]["theta"] = str(C.theta())
    _write(args.out, json.dumps(report, indent=2) + "\n")
    return 0


def cmd_graph_mix(args) -> int:
    if args.graph:
        G = read_graph(args.graph)
        C = read_cover(args.cover, G)
    else:
        G, C = gen_wacky_fixture(args.depth, args.dims)
    curve = local_mixing_curve(G, C, args.vertex - 1, args.t_max)
    lines = ["t,index,p_star\n"] + [f"{c.t},{c.index + 1},{c.p_star:.10f}\n" for c in curve]
    _write(args.out, "".join(lines))
    return 0


def cmd_gen_wacky(args) -> int:
    G, C = gen_wacky_fixture(args.depth, args.dims)
    write_graph(G, args.graph_out)
    write_cover(C, args.cover_out)
    return 0


def cmd_gen_dnf(args) -> int:
    f = gen_random_exact_dnf(args.n, args.k, args.s, np.random.default_rng(args.seed))
    _write(args.out, format_dnf(f))
    return 0


# -- learning -----------------------------------------------------------------------------


def cmd_listdecode(args) -> int:
    f = read_dnf(args.dnf)
    conf = _load_config(args.config)
    cfg = WalkConfig.from_dict(conf.get("walk", {}))
    oracle = MembershipOracle(f)
    res = list_decode(SatWalkOracle(oracle), _dist(args, f.n), cfg, conf.get("outer_repeats", 1), np.random.default_rng(args.seed))
    out = {
        "queries": res.queries,
        "terms": [
            {"term": list(d.term.literals), "text": str(d.term), "t": d.t, "ell": d.ell, "repeat": d.repeat}
            for d in res.discoveries
        ],
    }
    _write(args.out, json.dumps(out, indent=2) + "\n")
    return 0


def _report_path(out):
    return Path(str(out) + ".report.json") if out else None


def _emit_hypothesis(args, h, report):
    _write(args.out, format_dnf(h))
    rp = _report_path(args.out)
    text = json.dumps(report, indent=2) + "\n"
    if rp:
        rp.write_text(text)
    else:
        sys.stderr.write(text)


def cmd_learn_exact(args) -> int:
    f = read_dnf(args.dnf)
    conf = _load_config(args.config)
    cfg = LearnerConfig.from_dict(conf.get("learner", {}))
    wc = WalkConfig.from_dict(conf.get("walk", {}))
    d = _dist(args, f.n)
    oracle = MembershipOracle(f)
    rng = np.random.default_rng(args.seed)
    try:
        res = dnf_learn(oracle, d, plugin_weak_learner(f.k, f.s, cfg, wc), args.eps, f.s, rng, cfg)
    except BoostingFailed as exc:
        sys.stderr.write(f"learning failed: {exc}\n")
        return 1
    err = estimate_error(res.hypothesis, MembershipOracle(f), d) if f.n <= 20 else None
    _emit_hypothesis(args, res.hypothesis, {"iterations": res.iterations, "queries": res.queries, "error": err})
    return 0


def cmd_learn_smallk(args) -> int:
    f = read_dnf(args.dnf)
    d = _dist(args, f.n)
    oracle = MembershipOracle(f)
    k = args.k or f.k
    s = args.s or f.s
    res = learn_small_k(oracle, d, f.n, k, s, args.eps, args.delta, np.random.default_rng(args.seed))
    err = estimate_error(res.hypothesis, MembershipOracle(f), d) if f.n <= 20 else None
    _emit_hypothesis(args, res.hypothesis, {"samples": res.samples, "queries": res.queries, "error": err})
    return 0


def cmd_boost(args) -> int:
    f = read_dnf(args.dnf)
    conf = _load_config(args.config)
    cfg = LearnerConfig.from_dict(conf.get("learner", {}))
    d = _dist(args, f.n)
    oracle = MembershipOracle(f)
    if args.weak == "cheat":
        weak = cheat_weak_learner(f)
    else:
        weak = plugin_weak_learner(f.k, f.s, cfg, WalkConfig.from_dict(conf.get("walk", {})))
    try:
        res = dnf_learn(oracle, d, weak, args.gamma, f.s, np.random.default_rng(args.seed), cfg)
    except BoostingFailed as exc:
        sys.stderr.write(f"boosting failed: {exc}\n")
        return 1
    err = estimate_error(res.hypothesis, MembershipOracle(f), d) if f.n <= 20 else None
    _emit_hypothesis(args, res.hypothesis, {"iterations": res.iterations, "queries": res.queries, "error": err})
    return 0


# -- experiments -----------------------------------------------------------------------------


def cmd_run(args) -> int:
    spec = ExperimentSpec.load(args.spec)
    if args.seed is not None:
        spec.seed = args.seed
    if args.only_seed is not None:
        from .experiments import ExperimentReport

        report = ExperimentReport(spec, [run_one(spec, args.only_seed)])
    else:
        report = run(spec, args.reps)
    csv_path, json_path = report.write(args.out, args.stem)
    agg = report.aggregates()
    print(f"{spec.task}: {agg['successes']}/{agg['runs']} succeeded; wrote {csv_path} and {json_path}")
    return 0 if report.all_completed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lmdnf", description="Locally mixing walks and membership-query DNF learning.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", help="explicit graph analysis")
    gsub = g.add_subparsers(dest="graph_command", required=True)
    ga = gsub.add_parser("analyze", help="conductance, spectrum, mixing time, cover expansion")
    ga.add_argument("--graph", required=True)
    ga.add_argument("--cover")
    ga.add_argument("--eps", type=float, default=0.25)
    ga.add_argument("--out")
    ga.set_defaults(func=cmd_graph_analyze)
    gm = gsub.add_parser("mix", help="local mixing p_star curve as CSV")
    gm.add_argument("--graph")
    gm.add_argument("--cover")
    gm.add_argument("--depth", type=int, default=2, help="tree depth of the built-in fixture")
    gm.add_argument("--dims", type=int, nargs=2, default=(4, 6), help="hypercube dimensions of the built-in fixture")
    gm.add_argument("--vertex", type=int, default=1, help="1-based start vertex")
    gm.add_argument("--t-max", type=int, default=60)
    gm.add_argument("--out")
    gm.set_defaults(func=cmd_graph_mix)

    gw = sub.add_parser("gen-wacky", help="write the trees-into-hypercubes fixture")
    gw.add_argument("--depth", type=int, default=2)
    gw.add_argument("--dims", type=int, nargs=2, default=(4, 6))
    gw.add_argument("--graph-out", required=True)
    gw.add_argument("--cover-out", required=True)
    gw.set_defaults(func=cmd_gen_wacky)

    gd = sub.add_parser("gen-dnf", help="write a random exact-k DNF")
    for name in ("n", "k", "s"):
        gd.add_argument(f"--{name}", type=int, required=True)
    gd.add_argument("--seed", type=int, default=0)
    gd.add_argument("--out")
    gd.set_defaults(func=cmd_gen_dnf)

    def common(sp, eps=True):
        sp.add_argument("--dnf", required=True, help="target DNF file; backs the oracle only")
        sp.add_argument("--dist", help="distribution JSON (default uniform)")
        sp.add_argument("--config", help="JSON with optional 'learner' and 'walk' sections")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out")
        if eps:
            sp.add_argument("--eps", type=float, default=0.1)

    ld = sub.add_parser("listdecode", help="walk-based term list")
    common(ld, eps=False)
    ld.set_defaults(func=cmd_listdecode)

    le = sub.add_parser("learn-exact", help="boosted exact-k learner")
    common(le)
    le.set_defaults(func=cmd_learn_exact)

    ls = sub.add_parser("learn-smallk", help="greedy learner for small k")
    common(ls)
    ls.add_argument("--delta", type=float, default=0.01)
    ls.add_argument("--k", type=int, default=0)
    ls.add_argument("--s", type=int, default=0)
    ls.set_defaults(func=cmd_learn_smallk)

    bo = sub.add_parser("boost", help="booster with a chosen weak learner")
    common(bo, eps=False)
    bo.add_argument("--weak", choices=("plugin", "cheat"), default="plugin")
    bo.add_argument("--gamma", type=float, default=0.05)
    bo.set_defaults(func=cmd_boost)

    rn = sub.add_parser("run", help="seeded batch experiment from a JSON spec")
    rn.add_argument("--spec", required=True)
    rn.add_argument("--out", required=True, help="output directory")
    rn.add_argument("--reps", type=int)
    rn.add_argument("--seed", type=int, help="override the experiment's master seed")
    rn.add_argument("--only-seed", type=int, help="rerun a single row by its per-run seed")
    rn.add_argument("--stem", help="file name stem (default: task name)")
    rn.set_defaults(func=cmd_run)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:  # bad inputs get a message, not a traceback
        print(f"lmdnf {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
