"""Threshold-matching and collection algorithms over colour triples.

Both run a variable-time search over the ordered colour-triple domain.  The
matching algorithm switches between a threshold-search subroutine (cheap for
small thresholds) and a count-by-matrix-cube subroutine behind a capacity
filter (cheap for large thresholds); the crossover compares the threshold
exponent with the modeled matrix-multiplication exponent.

Execution is classical; the ledger charges the model formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import resolve_distinct
from .errors import InvalidDelta
from .instances import ColourBuckets, ColouredGraph
from .oracles import admissible_triples_exist, trace_count_triangles
from .qcost import CostLedger, grover_cost, threshold_grover_cost, vtgs_execute


@dataclass
class DmtConfig:
    """Parameters of one matching-triangles run."""

    delta: int
    n: int
    omega_model: float = 2.3728
    forced_mode: str = "auto"
    charge_global_n: bool = False
    distinct: bool | None = None

    @property
    def alpha(self) -> float:
        """Threshold exponent: delta = n ** alpha (0 for delta <= 1 or n == 1)."""
        if self.n < 2 or self.delta <= 1:
            return 0.0
        return math.log(self.delta) / math.log(self.n)

    def choose_mode(self) -> str:
        if self.forced_mode in ("small", "large"):
            return self.forced_mode
        return "small" if self.alpha < self.omega_model else "large"


def preprocess_buckets(g: ColouredGraph, ledger: CostLedger | None = None) -> ColourBuckets:
    """Group vertex ids contiguously by colour; one linear pass, n units charged."""
    counts = np.bincount(g.gamma, minlength=g.num_colours)
    offsets = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    order = np.argsort(g.gamma, kind="stable").astype(np.int64)
    if ledger is not None:
        ledger.charge("bucket-preprocess", g.n, size=g.n)
    return ColourBuckets(order=order, offsets=offsets)


def _exact_count(value: float, divisor: int) -> int:
    v = int(round(value))
    if abs(value - v) > 1e-6 or v % divisor != 0:
        raise ValueError(f"non-integral triangle count {value!r}")
    return v // divisor


def count_for_multiset_scan(g: ColouredGraph, buckets: ColourBuckets,
                            key: tuple[int, int, int]) -> int:
    """Triangles whose colour multiset equals `key`, by scanning the bucket
    product (the three-adjacency-lookup access pattern, vectorized)."""
    a, b, c = sorted(key)
    adj = g.adj.astype(np.float64)
    if a == b == c:
        v = buckets.bucket(a)
        sub = adj[np.ix_(v, v)]
        return _exact_count(((sub @ sub) * sub).sum(), 6)
    if a == b or b == c:
        dup, single = (a, c) if a == b else (b, a)
        vd = buckets.bucket(dup)
        vs = buckets.bucket(single)
        add = adj[np.ix_(vd, vd)]
        ads = adj[np.ix_(vd, vs)]
        return _exact_count(((add @ ads) * ads).sum(), 2)
    va, vb, vc = buckets.bucket(a), buckets.bucket(b), buckets.bucket(c)
    ab = adj[np.ix_(va, vb)]
    bc = adj[np.ix_(vb, vc)]
    ac = adj[np.ix_(va, vc)]
    return _exact_count(((ab @ bc) * ac).sum(), 1)


def count_for_multiset_trace(g: ColouredGraph, key: tuple[int, int, int]) -> int:
    """Triangles whose colour multiset equals `key`, by the colour-filtered
    matrix-cube trace (the large-threshold counting route).

    With three distinct colours only inter-class edges are kept, so every
    filtered triangle has one vertex per class.  With a repeated colour the
    dominant class keeps its internal edges and the count of its internal
    triangles is subtracted.
    """
    a, b, c = sorted(key)
    gamma = g.gamma
    adj = g.adj
    if a == b == c:
        v = np.flatnonzero(gamma == a)
        return trace_count_triangles(adj[np.ix_(v, v)])
    if a == b or b == c:
        dup, single = (a, c) if a == b else (b, a)
        vd = np.flatnonzero(gamma == dup)
        vs = np.flatnonzero(gamma == single)
        sel = np.concatenate([vd, vs])
        sub = adj[np.ix_(sel, sel)].copy()
        sub[len(vd):, len(vd):] = 0
        return trace_count_triangles(sub) - trace_count_triangles(adj[np.ix_(vd, vd)])
    sel = np.concatenate([np.flatnonzero(gamma == x) for x in (a, b, c)])
    labels = gamma[sel]
    sub = adj[np.ix_(sel, sel)].copy()
    sub[labels[:, None] == labels[None, :]] = 0
    return trace_count_triangles(sub)


def _unrank(idx: int, base: int) -> tuple[int, int, int]:
    return idx // (base * base), (idx // base) % base, idx % base


def _store(info: dict | None, **kv) -> None:
    if info is not None:
        info.update(kv)


def dmt_small_alpha(g: ColouredGraph, cfg: DmtConfig, buckets: ColourBuckets,
                    ledger: CostLedger, info: dict | None = None) -> bool:
    """Threshold search over every colour triple under variable-time search.

    Per ordered triple the predicate counts matching triangles over the
    bucket product V_i x V_j x V_k and compares with the threshold; the
    charge is the threshold-search cost sqrt(delta * |V_i||V_j||V_k|).
    Inadmissible triples are charged unchanged but never match.
    """
    distinct = resolve_distinct(cfg.distinct)
    if cfg.delta == 0:
        ledger.charge("dmt-small-trivial", 1)
        ans = admissible_triples_exist(g.num_colours, distinct)
        _store(info, mode="small", alpha=cfg.alpha, witness=None, adjacency_queries=0)
        return ans
    sizes = [int(s) for s in buckets.sizes]
    memo: dict[tuple[int, int, int], int] = {}
    queries = 0

    def evaluate(idx: int):
        nonlocal queries
        i, j, k = _unrank(idx, g.num_colours)
        p = sizes[i] * sizes[j] * sizes[k]
        cost = 1 if p == 0 else threshold_grover_cost(p, cfg.delta)
        if distinct and len({i, j, k}) != 3:
            return False, cost
        if p == 0:
            return False, cost
        queries += 3 * p
        key = tuple(sorted((i, j, k)))
        if key not in memo:
            memo[key] = count_for_multiset_scan(g, buckets, key)
        return memo[key] >= cfg.delta, cost

    witness, delta_ledger = vtgs_execute(
        g.num_colours ** 3, evaluate, ledger=ledger,
        label="dmt-small-vtgs", boost_size=g.n,
    )
    _store(info, mode="small", alpha=cfg.alpha, adjacency_queries=queries,
           vtgs_sq=delta_ledger.vtgs_sq,
           witness=None if witness is None else _unrank(witness, g.num_colours))
    return witness is not None


def dmt_large_alpha(g: ColouredGraph, cfg: DmtConfig, buckets: ColourBuckets,
                    ledger: CostLedger, info: dict | None = None) -> bool:
    """Capacity-filtered counting over every colour triple.

    Step 1 discards triples whose class-size product cannot host `delta`
    triangles at unit charge; survivors are counted by the filtered matrix
    cube at charge (|V_i|+|V_j|+|V_k|)^omega (or n^omega under the
    literal global charge).  At most n^3/delta triples reach step 2.
    """
    distinct = resolve_distinct(cfg.distinct)
    if cfg.delta == 0:
        ledger.charge("dmt-large-trivial", 1)
        ans = admissible_triples_exist(g.num_colours, distinct)
        _store(info, mode="large", alpha=cfg.alpha, witness=None, step2_triples=0)
        return ans
    sizes = [int(s) for s in buckets.sizes]
    memo: dict[tuple[int, int, int], int] = {}
    step2 = 0

    def evaluate(idx: int):
        nonlocal step2
        i, j, k = _unrank(idx, g.num_colours)
        if sizes[i] * sizes[j] * sizes[k] < cfg.delta:
            return False, 1
        step2 += 1
        charge_size = g.n if cfg.charge_global_n else sizes[i] + sizes[j] + sizes[k]
        cost = float(charge_size) ** cfg.omega_model
        if distinct and len({i, j, k}) != 3:
            return False, cost
        key = tuple(sorted((i, j, k)))
        if key not in memo:
            memo[key] = count_for_multiset_trace(g, key)
        return memo[key] >= cfg.delta, cost

    witness, delta_ledger = vtgs_execute(
        g.num_colours ** 3, evaluate, ledger=ledger,
        label="dmt-large-vtgs", boost_size=g.n,
    )
    _store(info, mode="large", alpha=cfg.alpha, step2_triples=step2,
           vtgs_sq=delta_ledger.vtgs_sq,
           witness=None if witness is None else _unrank(witness, g.num_colours))
    return witness is not None


def dmt_solve(g: ColouredGraph, delta: int, ledger: CostLedger | None = None,
              mode: str = "auto", charge_global_n: bool = False,
              distinct: bool | None = None, buckets: ColourBuckets | None = None,
              info: dict | None = None) -> bool:
    """Decide the threshold-matching problem, picking the cheaper subroutine.

    The small-threshold branch wins while the threshold exponent stays below
    the modeled matrix-multiplication exponent; `mode` forces a branch.
    """
    if ledger is None:
        ledger = CostLedger()
    if not 0 <= delta <= g.n ** 3:
        raise InvalidDelta(f"delta={delta} outside [0, {g.n ** 3}]")
    cfg = DmtConfig(delta=delta, n=g.n, omega_model=ledger.omega_model,
                    forced_mode=mode, charge_global_n=charge_global_n,
                    distinct=distinct)
    if buckets is None:
        buckets = preprocess_buckets(g, ledger)
    if cfg.choose_mode() == "small":
        return dmt_small_alpha(g, cfg, buckets, ledger, info=info)
    return dmt_large_alpha(g, cfg, buckets, ledger, info=info)


def tc_solve(g: ColouredGraph, ledger: CostLedger | None = None,
             buckets: ColourBuckets | None = None, distinct: bool | None = None,
             info: dict | None = None) -> bool:
    """Decide the collection problem: search for an uncovered colour triple.

    Per ordered triple the charge is the plain search cost over the bucket
    product; summed in squares over the whole domain this telescopes to
    exactly n^3, so the total is n^1.5 up to per-triple integer ceilings.
    """
    if ledger is None:
        ledger = CostLedger()
    distinct = resolve_distinct(distinct)
    if buckets is None:
        buckets = preprocess_buckets(g, ledger)
    sizes = [int(s) for s in buckets.sizes]
    memo: dict[tuple[int, int, int], int] = {}
    queries = 0

    def evaluate(idx: int):
        nonlocal queries
        i, j, k = _unrank(idx, g.num_colours)
        p = sizes[i] * sizes[j] * sizes[k]
        cost = 1 if p == 0 else grover_cost(p, 1)
        if distinct and len({i, j, k}) != 3:
            return False, cost
        if p == 0:
            return True, cost  # an admissible triple with an empty class is uncovered
        queries += 3 * p
        key = tuple(sorted((i, j, k)))
        if key not in memo:
            memo[key] = count_for_multiset_scan(g, buckets, key)
        return memo[key] == 0, cost

    witness, delta_ledger = vtgs_execute(
        g.num_colours ** 3, evaluate, ledger=ledger,
        label="tc-vtgs", boost_size=g.n,
    )
    _store(info, adjacency_queries=queries, vtgs_sq=delta_ledger.vtgs_sq,
           witness=None if witness is None else _unrank(witness, g.num_colours))
    return witness is None
