"""Benchmark driver, differential-test campaigns, and report emission.

Costs fitted by `bench` are the solver's ledger totals; the linear bucket
preprocessing runs outside the fitted ledger so exponents stay clean.  Wall
time is recorded for context but never fitted.

Per-trial seeds derive from (master seed, size, trial index) through the
splitmix64 mixer, so any execution order reproduces the same instances.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import oracles, reductions
from .errors import FgtError, UnsupportedCombination
from .instances import (
    MinPlusMatrix,
    TripartiteGraph,
    WeightedGraph,
    gen_apsp_instance,
    gen_coloured_graph,
    gen_minplus,
    gen_tripartite,
    gen_weighted_graph,
    fit_exponent,
    serialize,
)
from .qcost import CostLedger
from .triangles import dmt_solve, preprocess_buckets, tc_solve

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One splitmix64 step; the repo's documented seed-mixing primitive."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_seed(master: int, size: int, trial: int) -> int:
    """Deterministic per-trial seed: mix(mix(master ^ mix(size)) + trial)."""
    return splitmix64(splitmix64(master ^ splitmix64(size)) + trial)


def fit_loglog(ns, costs) -> tuple[float, float, float]:
    """Least-squares slope/intercept of log(cost) against log(n), plus the
    largest absolute residual."""
    x = np.log(np.asarray(ns, dtype=np.float64))
    y = np.log(np.asarray(costs, dtype=np.float64))
    a = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(a, y, rcond=None)
    residual = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.abs(residual).max())


@dataclass
class BenchRow:
    n: int
    delta: int | None
    cost: float
    wall_seconds: float
    answer: bool
    seed: int


@dataclass
class ScalingReport:
    """Per-experiment records plus the fitted log-log exponent."""

    problem: str
    algorithm: str
    rows: list[BenchRow]
    slope: float
    intercept: float
    residual_max: float

    def to_json_dict(self) -> dict:
        return {
            "problem": self.problem,
            "algorithm": self.algorithm,
            "slope": self.slope,
            "intercept": self.intercept,
            "residual_max": self.residual_max,
            "rows": [asdict(r) for r in self.rows],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ScalingReport":
        return cls(
            problem=d["problem"],
            algorithm=d["algorithm"],
            rows=[BenchRow(**r) for r in d["rows"]],
            slope=d["slope"],
            intercept=d["intercept"],
            residual_max=d["residual_max"],
        )


_BENCH_ALGOS = {"tc": ("vtgs", "auto"), "dmt": ("small", "large", "auto")}


def _bench_params(problem: str, n: int, params: dict) -> tuple[int, int | None]:
    """Resolve (num_colours, delta) for one size under the instance policy."""
    if problem == "tc":
        return int(params.get("num_colours", 4)), None
    if "delta" in params:
        return int(params.get("num_colours", 4)), int(params["delta"])
    alpha = float(params.get("alpha", 0.0))
    if params.get("colouring") == "capacity":
        ncol = max(1, round(n ** (1 - alpha / 3)))
        return ncol, (n // ncol) ** 3
    return int(params.get("num_colours", 4)), max(1, round(n**alpha))


def bench(problem: str, algorithm: str, sizes, trials: int, seed: int,
          params: dict | None = None) -> ScalingReport:
    """Run `trials` seeded instances per size and fit the cost exponent.

    Supported combinations: tc with {vtgs, auto}, dmt with {small, large,
    auto}.  Sizes must be strictly increasing, each at least 16, and at
    least four of them so the fit is meaningful.
    """
    params = dict(params or {})
    sizes = [int(s) for s in sizes]
    if len(sizes) < 4:
        raise ValueError("need at least 4 distinct sizes for the fit")
    if any(s < 16 for s in sizes) or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be strictly increasing and >= 16")
    if trials < 1:
        raise ValueError("trials must be positive")
    if problem not in _BENCH_ALGOS or algorithm not in _BENCH_ALGOS[problem]:
        raise UnsupportedCombination(f"bench does not support {problem}/{algorithm}")

    edge_prob = float(params.get("edge_prob", 0.5))
    omega = float(params.get("omega", 2.3728))
    boost = bool(params.get("boost", False))
    distinct = params.get("distinct")
    charge_global_n = bool(params.get("charge_global_n", False))

    rows: list[BenchRow] = []
    for n in sizes:
        ncol, delta = _bench_params(problem, n, params)
        for t in range(trials):
            s = trial_seed(seed, n, t)
            g = gen_coloured_graph(n, ncol, edge_prob, s)
            ledger = CostLedger(omega_model=omega, boost_enabled=boost)
            buckets = preprocess_buckets(g)
            t0 = time.perf_counter()
            if problem == "tc":
                answer = tc_solve(g, ledger, buckets=buckets, distinct=distinct)
            else:
                answer = dmt_solve(g, delta, ledger, mode=algorithm,
                                   charge_global_n=charge_global_n,
                                   distinct=distinct, buckets=buckets)
            wall = time.perf_counter() - t0
            rows.append(BenchRow(n=n, delta=delta, cost=float(ledger.total),
                                 wall_seconds=wall, answer=bool(answer), seed=s))
    slope, intercept, residual = fit_loglog([r.n for r in rows], [r.cost for r in rows])
    return ScalingReport(problem=problem, algorithm=algorithm, rows=rows,
                         slope=slope, intercept=intercept, residual_max=residual)


# ---------------------------------------------------------------------------
# Differential verification with counterexample shrinking
# ---------------------------------------------------------------------------


@dataclass
class VerifyResult:
    target: str
    passed: bool
    trials: int
    failures: list[dict] = field(default_factory=list)
    counterexample_paths: list[str] = field(default_factory=list)


def _pair_delete(pair, k):
    m, n = pair
    if m.n <= 1:
        return None
    return m.delete_index(k), n.delete_index(k)


def _weights_for_range(n: int, max_abs: int) -> float:
    return fit_exponent(n, max_abs)


class _Target:
    """One differential-verification target: generator, candidate, oracle."""

    def __init__(self, gen, run, oracle, size_of, delete, write, eq=None):
        self.gen = gen
        self.run = run
        self.oracle = oracle
        self.size_of = size_of
        self.delete = delete
        self.write = write
        self.eq = eq or (lambda a, b: np.array_equal(a, b))


def _write_weighted(inst, path):
    with open(path, "w") as fh:
        fh.write(serialize(inst))
    return [path]


def _make_targets() -> dict[str, _Target]:
    from .instances import INF

    def write_pair(pair, path):
        paths = []
        for tag, mat in zip(("m", "n"), pair):
            p = f"{path}.{tag}.txt"
            with open(p, "w") as fh:
                fh.write(f"minplus {mat.n} {mat.c}\n")
                for row in mat.m:
                    fh.write(" ".join("inf" if v == INF else str(int(v)) for v in row) + "\n")
            paths.append(p)
        return paths

    def write_coloured(inst, path):
        with open(path, "w") as fh:
            fh.write(serialize(inst))
        return [path]

    def write_tripartite(t, path):
        sizes = "_".join(str(s) for s in t.part_sizes)
        p = f"{path}.parts_{sizes}.txt"
        with open(p, "w") as fh:
            fh.write(serialize(t.graph))
        return [p]

    def gen_apsp(seed, max_n):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, max_n + 1))
        return gen_apsp_instance(n, 1.0, float(rng.uniform(0.3, 0.9)), seed)

    def gen_pair(seed, max_n):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, max_n + 1))
        return (gen_minplus(n, 1.0, float(rng.uniform(0.5, 1.0)), splitmix64(seed)),
                gen_minplus(n, 1.0, float(rng.uniform(0.5, 1.0)), splitmix64(seed + 1)))

    def gen_tri(seed, max_n):
        rng = np.random.default_rng(seed)
        part = max(1, max_n // 3)
        a, b, c = (int(rng.integers(1, part + 1)) for _ in range(3))
        return gen_tripartite(a, b, c, 1.0, float(rng.uniform(0.4, 0.9)), seed)

    def gen_nt(seed, max_n):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, max_n + 1))
        return gen_weighted_graph(n, _weights_for_range(n, 50), float(rng.uniform(0.3, 0.9)),
                                  seed, directed=False)

    def gen_coloured(seed, max_n):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, max_n + 1))
        ncol = int(rng.integers(1, min(6, n) + 1))
        return gen_coloured_graph(n, ncol, float(rng.uniform(0.2, 0.8)), seed)

    targets = {
        "apsp-to-mm": _Target(
            gen=gen_apsp,
            run=lambda g, corrupt: _maybe_bump(
                reductions.apsp_via_minplus(g, oracles.minplus_exact).dist, corrupt),
            oracle=lambda g: oracles.apsp_exact(g).dist,
            size_of=lambda g: g.n,
            delete=lambda g, v: g.delete_vertex(v) if g.n > 1 else None,
            write=_write_weighted,
        ),
        "mm-to-apsp": _Target(
            gen=gen_pair,
            run=lambda p, corrupt: _maybe_bump(
                reductions.minplus_via_apsp(p[0], p[1], oracles.apsp_exact).m, corrupt),
            oracle=lambda p: oracles.minplus_exact(p[0], p[1]).m,
            size_of=lambda p: p[0].n,
            delete=_pair_delete,
            write=write_pair,
        ),
        "mm-to-apnt": _Target(
            gen=gen_pair,
            run=lambda p, corrupt: _maybe_bump(
                reductions.minplus_via_apnt(p[0], p[1], oracles.apnt_exact).m, corrupt),
            oracle=lambda p: oracles.minplus_exact(p[0], p[1]).m,
            size_of=lambda p: p[0].n,
            delete=_pair_delete,
            write=write_pair,
        ),
        "apnt-to-nt": _Target(
            gen=gen_tri,
            run=lambda t, corrupt: _maybe_flip_flags(
                reductions.apnt_via_nt(t, lambda h: oracles.nt_exact(h, return_witness=True)).flags,
                corrupt),
            oracle=lambda t: oracles.apnt_exact(t).flags,
            size_of=lambda t: t.graph.n,
            delete=lambda t, v: t.delete_vertex(v) if t.graph.n > 1 else None,
            write=write_tripartite,
        ),
        "nt-to-zwt": _Target(
            gen=gen_nt,
            run=lambda g, corrupt: reductions.nt_via_zwt(
                g, oracles.zwt_exact,
                targets=(-3, -5, -6) if corrupt else reductions.ZERO_SHIFT_TARGETS),
            oracle=oracles.nt_exact,
            size_of=lambda g: g.n,
            delete=lambda g, v: g.delete_vertex(v) if g.n > 1 else None,
            write=_write_weighted,
            eq=lambda a, b: a == b,
        ),
        "apsp-to-zwt": _Target(
            gen=lambda seed, max_n: gen_apsp(seed, max_n),
            run=lambda g, corrupt: _maybe_bump(
                reductions.pipeline_run(g, "apsp-to-zwt")[0].dist, corrupt),
            oracle=lambda g: oracles.apsp_exact(g).dist,
            size_of=lambda g: g.n,
            delete=lambda g, v: g.delete_vertex(v) if g.n > 1 else None,
            write=_write_weighted,
        ),
        "dmt": _Target(
            gen=gen_coloured,
            run=lambda g, corrupt: dmt_solve(g, 1) ^ corrupt,
            oracle=lambda g: oracles.dmt_exact(g, 1),
            size_of=lambda g: g.n,
            delete=lambda g, v: g.delete_vertex(v) if g.n > 1 else None,
            write=write_coloured,
            eq=lambda a, b: a == b,
        ),
        "tc": _Target(
            gen=gen_coloured,
            run=lambda g, corrupt: tc_solve(g) ^ corrupt,
            oracle=lambda g: oracles.tc_exact(g),
            size_of=lambda g: g.n,
            delete=lambda g, v: g.delete_vertex(v) if g.n > 1 else None,
            write=write_coloured,
            eq=lambda a, b: a == b,
        ),
    }
    return targets


def _maybe_bump(matrix: np.ndarray, corrupt: bool) -> np.ndarray:
    if not corrupt:
        return matrix
    out = matrix.copy()
    out[0, 0] += 1
    return out


def _maybe_flip_flags(flags: np.ndarray, corrupt: bool) -> np.ndarray:
    if not corrupt or flags.size == 0:
        return flags
    out = flags.copy()
    out.flat[0] = ~out.flat[0]
    return out


def _shrink(target: _Target, inst, corrupt: bool):
    """Greedy vertex deletion while the mismatch persists."""
    current = inst
    improved = True
    while improved and target.size_of(current) > 1:
        improved = False
        for v in range(target.size_of(current)):
            try:
                candidate = target.delete(current, v)
            except (ValueError, FgtError):
                candidate = None
            if candidate is None:
                continue
            try:
                if not target.eq(target.run(candidate, corrupt), target.oracle(candidate)):
                    current = candidate
                    improved = True
                    break
            except FgtError:
                continue
    return current


def verify(target_id: str, trials: int, max_n: int, seed: int,
           corrupt: bool = False, out_dir: str | None = None) -> VerifyResult:
    """Differential suite for one reduction or algorithm.

    Mismatches are shrunk to a locally minimal counterexample by vertex
    deletion and written to `out_dir` in the instance text formats.
    """
    targets = _make_targets()
    if target_id not in targets:
        raise UnsupportedCombination(f"unknown verify target {target_id!r}")
    target = targets[target_id]
    result = VerifyResult(target=target_id, passed=True, trials=trials)
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
    for t in range(trials):
        inst = target.gen(trial_seed(seed, max_n, t), max_n)
        try:
            mismatch = not target.eq(target.run(inst, corrupt), target.oracle(inst))
        except FgtError:
            mismatch = True
        if not mismatch:
            continue
        result.passed = False
        small = _shrink(target, inst, corrupt)
        entry = {"trial": t, "size": target.size_of(small)}
        if out_dir is not None:
            base = os.path.join(out_dir, f"counterexample_{target_id}_{t:04d}")
            paths = target.write(small, base if "." in os.path.basename(base) else base + ".txt")
            entry["paths"] = paths
            result.counterexample_paths.extend(paths)
        result.failures.append(entry)
    return result


# ---------------------------------------------------------------------------
# Report emission
# ---------------------------------------------------------------------------

_CSV_COLUMNS = ("problem", "algorithm", "n", "delta", "cost", "wall_seconds", "answer", "seed")


def report_to_csv(report: ScalingReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_COLUMNS)
    for r in report.rows:
        writer.writerow([
            report.problem,
            report.algorithm,
            r.n,
            "" if r.delta is None else r.delta,
            repr(r.cost),
            repr(r.wall_seconds),
            "true" if r.answer else "false",
            r.seed,
        ])
    return buf.getvalue()


def report_to_json(report: ScalingReport) -> str:
    return json.dumps(report.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n"


def report_emit(report: ScalingReport, fmt: str, path: str) -> None:
    """Write a report as json or csv; I/O failures carry the path."""
    if fmt == "json":
        payload = report_to_json(report)
    elif fmt == "csv":
        payload = report_to_csv(report)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    try:
        with open(path, "w", newline="") as fh:
            fh.write(payload)
    except OSError as exc:
        raise FgtError(f"cannot write report to {path}: {exc}") from exc


def report_load_json(path: str) -> ScalingReport:
    try:
        with open(path) as fh:
            return ScalingReport.from_json_dict(json.load(fh))
    except OSError as exc:
        raise FgtError(f"cannot read report from {path}: {exc}") from exc
