"""Seeded batch experiments with CSV and JSON reports.

Every run gets its own seed derived from (spec seed, run index); the CSV row
carries it, and ``run_one(spec, seed)`` reproduces that row alone.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
import traceback
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from ..dnf_core import Dnf, MembershipOracle, SampleDistribution, parse_dnf
from ..graph_engine import (
    local_mixing_curve,
    mixing_time_exact,
    normalized_laplacian_spectrum,
    phi_graph_bruteforce,
    point_mass,
    replay_local_mixing,
    stationary,
    walk_distribution,
    empirical_tv,
    MultiGraph,
)
from ..learner import (
    BoostingFailed,
    LearnerConfig,
    cheat_weak_learner,
    dnf_learn,
    estimate_error,
    large_k_reduction,
    learn_small_k,
    plugin_weak_learner,
)
from ..walker import SatWalkOracle, WalkConfig, list_decode, walk_endpoints
from .fixtures import gen_random_exact_dnf, gen_wacky_fixture, random_connected_graph, two_expanders_fixture

TASKS = (
    "listdecode",
    "learn-exact",
    "learn-smallk",
    "learn-largek",
    "boost",
    "graph-analyze",
    "graph-mix",
    "walk-check",
)
CSV_COLUMNS = ("seed", "task", "n", "k", "s", "success", "queries", "error", "seconds")


@dataclass
class ExperimentSpec:
    task: str
    seed: int = 0
    reps: int = 1
    n: int = 0
    k: int = 0
    s: int = 0
    dist: str = "uniform"
    target: str | None = None  # DNF text; None means a random exact-k DNF per run
    eps: float = 0.1
    delta: float = 0.01
    gamma: float = 0.05
    weak: str = "plugin"
    config: dict = field(default_factory=dict)  # {"learner": {...}, "walk": {...}}
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}; choose from {TASKS}")
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        if self.dist not in ("uniform", "product"):
            raise ValueError("dist must be uniform or product")
        if self.weak not in ("plugin", "cheat"):
            raise ValueError("weak must be plugin or cheat")
        if self.task in ("listdecode", "learn-exact", "learn-smallk", "learn-largek", "boost", "walk-check") and self.target is None:
            if not 1 <= self.k <= self.n or self.s < 1:
                raise ValueError("random targets need 1 <= k <= n and s >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentSpec":
        return cls(**data)

    @classmethod
    def load(cls, path) -> "ExperimentSpec":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def learner_config(self) -> LearnerConfig:
        return LearnerConfig.from_dict(self.config.get("learner", {}))

    def walk_config(self) -> WalkConfig:
        return WalkConfig.from_dict(self.config.get("walk", {}))


@dataclass
class RunRecord:
    seed: int
    task: str
    n: int
    k: int
    s: int
    success: bool
    queries: int
    error: float | None
    seconds: float
    completed: bool = True
    detail: dict = field(default_factory=dict)

    def csv_row(self) -> list:
        err = "" if self.error is None else repr(float(self.error))
        return [self.seed, self.task, self.n, self.k, self.s, int(self.success), self.queries, err, f"{self.seconds:.3f}"]


@dataclass
class ExperimentReport:
    spec: ExperimentSpec
    records: list[RunRecord]

    @property
    def success_rate(self) -> float:
        return sum(r.success for r in self.records) / len(self.records)

    @property
    def all_completed(self) -> bool:
        return all(r.completed for r in self.records)

    def aggregates(self) -> dict:
        q = [r.queries for r in self.records]
        return {
            "runs": len(self.records),
            "successes": sum(r.success for r in self.records),
            "success_rate": self.success_rate,
            "mean_queries": sum(q) / len(q),
            "max_queries": max(q),
            "completed": sum(r.completed for r in self.records),
        }

    def to_csv(self, with_timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = CSV_COLUMNS if with_timing else CSV_COLUMNS[:-1]
        w.writerow(cols)
        for r in self.records:
            row = r.csv_row()
            w.writerow(row if with_timing else row[:-1])
        return buf.getvalue()

    def to_json(self, with_timing: bool = True) -> str:
        recs = []
        for r in self.records:
            d = asdict(r)
            if not with_timing:
                d.pop("seconds")
            recs.append(d)
        return json.dumps(
            {"spec": asdict(self.spec), "aggregates": self.aggregates(), "records": recs},
            indent=2,
            sort_keys=True,
            default=_json_default,
        )

    def write(self, out_dir, stem: str | None = None) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = stem or self.spec.task
        csv_path, json_path = out / f"{stem}.csv", out / f"{stem}.json"
        csv_path.write_text(self.to_csv())
        json_path.write_text(self.to_json())
        return csv_path, json_path


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


def derive_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


# -- instance helpers -------------------------------------------------------------


def _target(spec: ExperimentSpec, rng) -> Dnf:
    if spec.target is not None:
        return parse_dnf(spec.target)
    return gen_random_exact_dnf(spec.n, spec.k, spec.s, rng)


def _distribution(spec: ExperimentSpec, n: int, rng) -> SampleDistribution:
    if spec.dist == "uniform":
        return SampleDistribution.uniform(n)
    if "biases" in spec.params:
        return SampleDistribution.product(spec.params["biases"])
    lo, hi = spec.params.get("bias_range", (0.25, 0.75))
    return SampleDistribution.product(rng.uniform(lo, hi, n).round(6))


def _size_bound(s: int, x: float) -> float:
    return 8 * s * math.log(1 / x)


# -- tasks ------------------------------------------------------------------------------


def _task_listdecode(spec, rng):
    f = _target(spec, rng)
    d = _distribution(spec, f.n, rng)
    oracle = MembershipOracle(f)
    res = list_decode(SatWalkOracle(oracle), d, spec.walk_config(), spec.params.get("outer_repeats", 1), rng)
    hits = [str(t) for t in res.terms if t in set(f.terms)]
    return f, bool(hits), oracle.query_count, None, {"list_size": len(res.terms), "true_terms_found": hits}


def _task_learn_exact(spec, rng):
    f = _target(spec, rng)
    d = _distribution(spec, f.n, rng)
    oracle = MembershipOracle(f)
    cfg = spec.learner_config()
    weak = plugin_weak_learner(f.k, f.s, cfg, spec.walk_config())
    try:
        res = dnf_learn(oracle, d, weak, spec.eps, f.s, rng, cfg)
    except BoostingFailed as exc:
        return f, False, oracle.query_count, None, {"failure": str(exc)}
    err = estimate_error(res.hypothesis, MembershipOracle(f), d)
    ok = err <= spec.eps and res.hypothesis.s <= _size_bound(f.s, spec.eps)
    return f, ok, oracle.query_count, err, {"terms": res.hypothesis.s, "weak_calls": res.iterations}


def _task_boost(spec, rng):
    f = _target(spec, rng)
    d = _distribution(spec, f.n, rng)
    oracle = MembershipOracle(f)
    cfg = spec.learner_config()
    if spec.weak == "cheat":
        weak = cheat_weak_learner(f)
    else:
        weak = plugin_weak_learner(f.k, f.s, cfg, spec.walk_config())
    try:
        res = dnf_learn(oracle, d, weak, spec.gamma, f.s, rng, cfg)
    except BoostingFailed as exc:
        return f, False, oracle.query_count, None, {"failure": str(exc)}
    err = estimate_error(res.hypothesis, MembershipOracle(f), d)
    ok = err <= 4 * spec.gamma and res.hypothesis.s <= _size_bound(f.s, spec.gamma)
    return f, ok, oracle.query_count, err, {"terms": res.hypothesis.s, "uncovered_estimates": res.uncovered_estimates}


def _task_learn_smallk(spec, rng):
    f = _target(spec, rng)
    d = _distribution(spec, f.n, rng)
    oracle = MembershipOracle(f)
    k = spec.k or f.k
    s = spec.s or f.s
    res = learn_small_k(oracle, d, f.n, k, s, spec.eps, spec.delta, rng)
    err = estimate_error(res.hypothesis, MembershipOracle(f), d)
    bound = s * math.ceil(math.log2(2 / spec.eps))
    ok = err <= spec.eps and res.hypothesis.s <= bound
    return f, ok, oracle.query_count, err, {"terms": res.hypothesis.s, "size_bound": bound, "samples": res.samples}


def _task_learn_largek(spec, rng):
    f = _target(spec, rng)
    d = _distribution(spec, f.n, rng)
    oracle = MembershipOracle(f)
    cfg = spec.learner_config()
    wc = spec.walk_config()

    def inner(wrapped, wd, r):
        weak = plugin_weak_learner(f.k, f.s, cfg, wc)
        return dnf_learn(wrapped, wd, weak, spec.eps, f.s, r, cfg).hypothesis

    try:
        res = large_k_reduction(oracle, d, f.n, f.k, inner, rng)
    except BoostingFailed as exc:
        return f, False, oracle.query_count, None, {"failure": str(exc)}
    err = estimate_error(res.hypothesis, MembershipOracle(f), d)
    return f, err <= spec.eps, oracle.query_count, err, {"terms": res.hypothesis.s, "measured_error": res.measured_error}


def _task_graph_analyze(spec, rng):
    lo, hi = spec.params.get("N_range", (3, 12))
    G = random_connected_graph(rng, int(rng.integers(lo, hi + 1)), spec.params.get("p", 0.4), spec.params.get("max_mult", 2))
    phi = phi_graph_bruteforce(G)
    lam2 = normalized_laplacian_spectrum(G).lambda2
    tmix = mixing_time_exact(G, 0.25)
    bound = math.ceil(math.log(4 / stationary(G).min()) / lam2)
    cheeger = lam2 / 2 <= float(phi) + 1e-12 and float(phi) <= math.sqrt(2 * lam2) + 1e-6
    detail = {"N": G.N, "phi": str(phi), "lambda2": lam2, "tmix": tmix, "tmix_bound": bound, "cheeger_ok": cheeger}
    return None, cheeger and tmix <= bound, 0, None, detail


def find_plateau(values, lo: float, hi: float, min_len: int) -> tuple[int, int] | None:
    """First run of at least ``min_len`` consecutive t >= 1 with lo <= value <= hi."""
    start = None
    for t, v in enumerate(values):
        if t >= 1 and lo <= v <= hi:
            start = t if start is None else start
            if t - start + 1 >= min_len:
                end = t
                while end + 1 < len(values) and lo <= values[end + 1] <= hi:
                    end += 1
                return start, end
        else:
            start = None
    return None


def _task_graph_mix(spec, rng):
    p = spec.params
    if p.get("fixture", "wacky") == "wacky":
        G, C = gen_wacky_fixture(p.get("depth", 2), p.get("dims", (4, 6)))
    else:
        G, C = two_expanders_fixture(p.get("r", 3))
    v = p.get("vertex", 0)
    curve = local_mixing_curve(G, C, v, p.get("t_max", 60))
    pstars = [c.p_star for c in curve]
    lo, hi = p.get("plateau", (0.4, 0.6))
    plateau = find_plateau(pstars, lo, hi, p.get("plateau_len", 10))
    ts = p.get("replay_t") or ([(plateau[0] + plateau[1]) // 2] if plateau else [len(curve) - 1])
    replays = []
    ok = plateau is not None or not p.get("require_plateau", True)
    for t in ts:
        best = curve[t]
        rep = replay_local_mixing(G, C, v, t, best.index, p.get("walks", 100_000), rng)
        good = abs(rep.acceptance - best.p_star) <= 0.01 and rep.tv_uniform <= 0.02
        ok = ok and good
        replays.append({"t": t, "index": best.index, "p_star": best.p_star, "acceptance": rep.acceptance, "tv": rep.tv_uniform, "ok": good})
    detail = {"N": G.N, "p_star_curve": [round(x, 6) for x in pstars], "plateau": plateau, "replays": replays}
    return None, ok, 0, None, detail


def materialize_sat_graph(f: Dnf) -> tuple[MultiGraph, list[int]]:
    """The nice induced subgraph of the n-cube on f^-1(1)."""
    pts = [x for x in range(1 << f.n) if f.eval(x)]
    index = {x: i for i, x in enumerate(pts)}
    edges = [(index[x], index[x ^ (1 << b)]) for x in pts for b in range(f.n) if x < x ^ (1 << b) and (x ^ (1 << b)) in index]
    return MultiGraph.from_edges(len(pts), edges).make_nice(), pts


def _task_walk_check(spec, rng):
    f = _target(spec, rng)
    G, pts = materialize_sat_graph(f)
    index = {x: i for i, x in enumerate(pts)}
    oracle = MembershipOracle(f)
    w = SatWalkOracle(oracle)
    y = pts[int(rng.integers(len(pts)))]
    walks = spec.params.get("walks", 100_000)
    worst = 0.0
    tvs = {}
    for t in spec.params.get("ts", (1, 5, 20)):
        ends = walk_endpoints(w, y, t, walks, rng)
        exact = walk_distribution(G, point_mass(G.N, index[y]), t)
        tvs[t] = empirical_tv(np.array([index[int(e)] for e in ends]), exact)
        worst = max(worst, tvs[t])
    return f, worst <= spec.params.get("tol", 0.02), oracle.query_count, worst, {"tv": tvs, "support": len(pts)}


TASK_FUNCS: dict[str, Callable] = {
    "listdecode": _task_listdecode,
    "learn-exact": _task_learn_exact,
    "learn-smallk": _task_learn_smallk,
    "learn-largek": _task_learn_largek,
    "boost": _task_boost,
    "graph-analyze": _task_graph_analyze,
    "graph-mix": _task_graph_mix,
    "walk-check": _task_walk_check,
}


def run_one(spec: ExperimentSpec, seed: int) -> RunRecord:
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    try:
        f, ok, queries, err, detail = TASK_FUNCS[spec.task](spec, rng)
        n, k, s = (f.n, f.k, f.s) if f is not None else (spec.n, spec.k, spec.s)
        completed = True
    except Exception as exc:  # per-run failures are data
        n, k, s = spec.n, spec.k, spec.s
        ok, queries, err, completed = False, 0, None, False
        detail = {"exception": f"{type(exc).__name__}: {exc}", "traceback": traceback.format_exc(limit=3)}
    return RunRecord(seed, spec.task, n, k, s, bool(ok), int(queries), err, time.perf_counter() - t0, completed, detail)


def run(spec: ExperimentSpec, reps: int | None = None) -> ExperimentReport:
    """Run ``reps`` (default spec.reps) repetitions with derived seeds."""
    reps = spec.reps if reps is None else reps
    return ExperimentReport(spec, [run_one(spec, derive_seed(spec.seed, i)) for i in range(reps)])
