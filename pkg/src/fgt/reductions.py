"""The fine-grained reduction chain between the path/matrix/triangle problems.

Each reduction is an instance transformer plus an answer-lifting wrapper
parameterized by a solver for the target problem, so the same code runs
against exact oracles (differential tests) or against further reductions
(full pipeline composition).
"""

from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InternalInconsistency, NegativeCycle
from .instances import (
    INF,
    MinPlusMatrix,
    TripartiteGraph,
    WeightedGraph,
    fit_exponent,
    serialize,
    weight_bound,
)
from .oracles import ApspResult, PairFlags
from .qcost import ceil_log2

PIPELINES = ("apsp-to-mm", "mm-to-apnt", "apnt-to-nt", "nt-to-zwt", "apsp-to-zwt")

ZERO_SHIFT_TARGETS = (-3, -4, -5, -6)


@dataclass
class ReductionTrace:
    """Subcall evidence: per-target call counts and total instance sizes."""

    keep_records: bool = True
    records: list[tuple[str, str, object]] = field(default_factory=list)
    calls: Counter = field(default_factory=Counter)
    total_sizes: Counter = field(default_factory=Counter)

    def record(self, problem: str, size: int, answer=None, summary: str | None = None):
        self.calls[problem] += 1
        self.total_sizes[problem] += size
        if self.keep_records:
            self.records.append((problem, summary or f"n={size}", answer))

    def count(self, problem: str) -> int:
        return self.calls[problem]


def apsp_via_minplus(g: WeightedGraph, mm, trace: ReductionTrace | None = None) -> ApspResult:
    """All-pairs distances through repeated squaring of the weight matrix.

    Makes exactly ceil(log2 n) distance-product calls; a negative diagonal in
    any intermediate power aborts with NegativeCycle.
    """
    if not g.directed:
        raise ValueError("expects a directed instance")
    d = g.w.astype(np.int64, copy=True)
    for _ in range(ceil_log2(g.n)):
        operand = MinPlusMatrix.from_entries(d, min_c=g.c)
        product = mm(operand, operand)
        if trace is not None:
            trace.record("minplus", product.n)
        d = product.m
        if (np.diag(d) < 0).any():
            raise NegativeCycle("negative diagonal in an intermediate power")
    return ApspResult(dist=d)


def minplus_via_apsp(m: MinPlusMatrix, n: MinPlusMatrix, apsp,
                     trace: ReductionTrace | None = None) -> MinPlusMatrix:
    """Distance product read off the distance matrix of a 3n-node layered graph.

    The layers are directed (a_i -> b_k -> c_j), so every a-to-c path has
    exactly two edges and the distance equals the product entry even with
    negative weights.
    """
    if m.n != n.n:
        raise DimensionMismatch(f"{m.n} vs {n.n}")
    dim = m.n
    w = np.full((3 * dim, 3 * dim), INF, dtype=np.int64)
    np.fill_diagonal(w, 0)
    w[:dim, dim : 2 * dim] = m.m
    w[dim : 2 * dim, 2 * dim :] = n.m
    g = WeightedGraph.from_weights(w, directed=True, min_c=max(m.c, n.c))
    result = apsp(g)
    if trace is not None:
        trace.record("apsp", g.n)
    return MinPlusMatrix.from_entries(result.dist[:dim, 2 * dim :], min_c=max(m.c, n.c))


def minplus_via_apnt(m: MinPlusMatrix, n: MinPlusMatrix, apnt,
                     trace: ReductionTrace | None = None) -> MinPlusMatrix:
    """Distance product by lockstep per-pair binary search with an
    all-pairs-negative-triangle solver.

    Part A holds the row vertices, part B the column vertices, and part C the
    contraction index, so a flag at (i, j) witnesses min_k(M[i,k] + N[k,j])
    below the pair's probe value.  An initial feasibility round (probe above
    the attainable range) resolves INF pairs; the remaining pairs halve a
    shared interval, one solver call per round.
    """
    if m.n != n.n:
        raise DimensionMismatch(f"{m.n} vs {n.n}")
    dim = m.n
    b = max(weight_bound(dim, m.c), weight_bound(dim, n.c))
    w_ac = m.m          # A-C block indexed (i, k): M[i, k]
    w_bc = n.m.T        # B-C block indexed (j, k): N[k, j]

    def solve_round(probe: np.ndarray, active: np.ndarray) -> np.ndarray:
        ab = np.where(active, -probe, INF).astype(np.int64)
        inst = TripartiteGraph.from_blocks(ab, w_bc, w_ac, min_c=1.0)
        flags = apnt(inst).flags
        if trace is not None:
            trace.record("apnt", inst.graph.n)
        return flags

    all_pairs = np.ones((dim, dim), dtype=bool)
    feasible = solve_round(np.full((dim, dim), 2 * b + 1, dtype=np.int64), all_pairs)
    lo = np.full((dim, dim), -2 * b, dtype=np.int64)
    hi = np.full((dim, dim), 2 * b + 1, dtype=np.int64)
    if feasible.any():
        for _ in range(ceil_log2(4 * b + 1)):
            mid = (lo + hi) // 2
            flags = solve_round(mid, feasible)
            shrink_hi = feasible & flags
            shrink_lo = feasible & ~flags
            hi = np.where(shrink_hi, mid, hi)
            lo = np.where(shrink_lo, mid, lo)
    out = np.where(feasible, lo, INF).astype(np.int64)
    return MinPlusMatrix.from_entries(out, min_c=max(m.c, n.c))


def _chunks(items: np.ndarray, size: int) -> list[np.ndarray]:
    return [items[i : i + size] for i in range(0, len(items), size)]


def apnt_via_nt(t: TripartiteGraph, nt, decision_only: bool = False,
                trace: ReductionTrace | None = None) -> PairFlags:
    """All-pairs negative triangle by repeated single-triangle extraction.

    Each part is split into ceil(n^(1/3)) blocks of at most ceil(n^(2/3))
    vertices.  Per block triple, the target solver is queried on the induced
    subgraph; every witness sets its (a, b) flag and deletes that edge from
    the working copy, so each pair is extracted at most once overall and the
    call count is (#block triples) + (#witnesses).

    With `decision_only`, the solver returns a bare boolean and witnesses are
    recovered by halving one part at a time (at most 3*ceil(log2 n) extra
    decisions per witness).
    """
    work = t.graph.w.astype(np.int64, copy=True)
    parent_bound = t.graph.bound
    parts = [t.part_vertices(p) for p in range(3)]
    pos = [{int(v): i for i, v in enumerate(part)} for part in parts]
    n_star = max(1, max(len(p) for p in parts))
    block_size = max(1, math.ceil(n_star ** (2 / 3) - 1e-9))
    blocks = [_chunks(part, block_size) for part in parts]
    flags = np.zeros((len(parts[0]), len(parts[1])), dtype=bool)

    def induced(va, vb, vc) -> WeightedGraph:
        sel = np.concatenate([va, vb, vc])
        sub = work[np.ix_(sel, sel)]
        return WeightedGraph._trusted(len(sel), fit_exponent(len(sel), parent_bound), sub, False)

    def ask(va, vb, vc):
        g = induced(va, vb, vc)
        if trace is not None:
            trace.record("nt", g.n)
        return nt(g)

    def recover(va, vb, vc) -> tuple[int, int, int]:
        cand = [list(va), list(vb), list(vc)]
        for p in range(3):
            while len(cand[p]) > 1:
                half = cand[p][: len(cand[p]) // 2]
                probe = [cand[0], cand[1], cand[2]]
                probe[p] = half
                if ask(np.array(probe[0]), np.array(probe[1]), np.array(probe[2])):
                    cand[p] = half
                else:
                    cand[p] = cand[p][len(cand[p]) // 2 :]
        return cand[0][0], cand[1][0], cand[2][0]

    for va in blocks[0]:
        for vb in blocks[1]:
            for vc in blocks[2]:
                if trace is not None:
                    trace.record("nt-block-triple", len(va) + len(vb) + len(vc))
                while True:
                    if decision_only:
                        if not ask(va, vb, vc):
                            break
                        ga, gb, gc = recover(va, vb, vc)
                    else:
                        found, wit = ask(va, vb, vc)
                        if not found:
                            break
                        sel = np.concatenate([va, vb, vc])
                        ga, gb, gc = (int(sel[x]) for x in wit)
                    s = int(work[ga, gb]) + int(work[gb, gc]) + int(work[ga, gc])
                    if work[ga, gb] == INF or s >= 0:
                        raise InternalInconsistency("witness is not a negative triangle")
                    flags[pos[0][ga], pos[1][gb]] = True
                    work[ga, gb] = INF
                    work[gb, ga] = INF
                    if trace is not None:
                        trace.record("nt-witness", 3)
    return PairFlags(flags=flags)


def zero_shift_levels(bound: int) -> range:
    """Scaling levels used by the negative-to-zero triangle construction."""
    return range(ceil_log2(12 * bound) + 2)


def scaled_floor_hits(weights: tuple[int, int, int], bound: int) -> bool:
    """Kernel of the negative-to-zero reduction for one triangle.

    After scaling the three weights by 4, some level's per-edge floors sum to
    one of the shift targets iff the original weight sum is negative.
    """
    scaled = [4 * int(x) for x in weights]
    for lvl in zero_shift_levels(bound):
        f = sum(v >> lvl for v in scaled)  # arithmetic shift floors toward -inf
        if f in ZERO_SHIFT_TARGETS:
            return True
    return False


def tripartite_copies(g: WeightedGraph) -> TripartiteGraph:
    """Three vertex copies with every original edge repeated across the parts.

    Each triangle of the source appears (six times) as a one-per-part
    triangle of the copy graph with the same weight sum, and vice versa.
    """
    block = g.w.astype(np.int64, copy=True)
    np.fill_diagonal(block, INF)
    return TripartiteGraph.from_blocks(block, block, block, min_c=g.c)


def nt_via_zwt(g: WeightedGraph, zwt, want_witness: bool = False,
               trace: ReductionTrace | None = None,
               targets: tuple[int, ...] = ZERO_SHIFT_TARGETS):
    """Negative-triangle decision through a zero-weight-triangle solver.

    The graph is tripartified, all weights are scaled by 4 and floored at
    every level 2^l, and each shift target is subtracted from the A-C edges;
    the answer is the OR of the zero-triangle queries.  Any hit maps back to
    a genuine negative triangle of the source (floor-sum <= -3 forces a
    negative scaled sum), which also makes witness propagation sound.
    """
    if g.directed:
        raise ValueError("expects an undirected instance")
    n = g.n
    fin = g.w != INF
    off = ~np.eye(n, dtype=bool)
    edge = fin & off
    scaled = 4 * np.where(fin, g.w, 0)
    size = 3 * n
    c3 = fit_exponent(size, 4 * g.bound + max(-t for t in targets))
    w3 = np.full((size, size), INF, dtype=np.int64)
    np.fill_diagonal(w3, 0)
    for lvl in zero_shift_levels(g.bound):
        floors = np.where(edge, scaled // (1 << lvl), INF).astype(np.int64)
        w3[:n, n : 2 * n] = floors
        w3[n : 2 * n, :n] = floors
        w3[n : 2 * n, 2 * n :] = floors
        w3[2 * n :, n : 2 * n] = floors
        for tau in targets:
            ac = np.where(edge, floors - tau, INF).astype(np.int64)
            w3[:n, 2 * n :] = ac
            w3[2 * n :, :n] = ac
            inst = WeightedGraph._trusted(size, c3, w3, False)
            res = zwt(inst)
            if trace is not None:
                trace.record("zwt", inst.n)
            if want_witness:
                found, wit = res
                if found:
                    u, v, x = wit[0], wit[1] - n, wit[2] - 2 * n
                    s = int(g.w[u, v]) + int(g.w[v, x]) + int(g.w[u, x])
                    if s >= 0:
                        raise InternalInconsistency("mapped witness not negative")
                    return True, tuple(sorted((u, v, x)))
            elif res:
                return True
    return (False, None) if want_witness else False


class _Dumper:
    """Writes the weighted instances constructed along a pipeline run."""

    def __init__(self, directory: str | None):
        self.directory = directory
        self.counter = 0
        if directory is not None:
            os.makedirs(directory, exist_ok=True)

    def __call__(self, stage: str, instance) -> None:
        if self.directory is None:
            return
        if isinstance(instance, TripartiteGraph):
            sizes = "_".join(str(s) for s in instance.part_sizes)
            name = f"{self.counter:05d}_{stage}_parts_{sizes}.txt"
            payload = serialize(instance.graph)
        elif isinstance(instance, WeightedGraph):
            name = f"{self.counter:05d}_{stage}.txt"
            payload = serialize(instance)
        else:
            return  # min-plus operands have no external text format
        self.counter += 1
        with open(os.path.join(self.directory, name), "w") as fh:
            fh.write(payload)


def pipeline_run(source, pipeline: str, dump_dir: str | None = None,
                 keep_records: bool = False, decision_only: bool = False):
    """Compose a reduction chain with exact oracles as leaf solvers.

    Returns (answer, trace).  The answer type follows the source problem of
    the pipeline: a distance matrix for apsp-to-*, a min-plus matrix for
    mm-to-apnt, pair flags for apnt-to-nt, and a boolean for nt-to-zwt.

    For the full apsp-to-zwt composition the negative-triangle stage
    propagates witnesses from the zero-triangle leaf by default;
    `decision_only` switches the extraction to the halving self-reduction.
    """
    from . import oracles

    trace = ReductionTrace(keep_records=keep_records)
    dump = _Dumper(dump_dir)

    if pipeline == "apsp-to-mm":
        def mm(a, b):
            return oracles.minplus_exact(a, b)

        return apsp_via_minplus(source, mm, trace=trace), trace

    if pipeline == "mm-to-apnt":
        if isinstance(source, tuple):
            m, n = source
        else:
            m = n = MinPlusMatrix.from_entries(source.w, min_c=source.c)

        def apnt(t):
            dump("apnt", t)
            return oracles.apnt_exact(t)

        return minplus_via_apnt(m, n, apnt, trace=trace), trace

    if pipeline == "apnt-to-nt":
        t = source if isinstance(source, TripartiteGraph) else tripartite_copies(source)

        def nt(h):
            dump("nt", h)
            return oracles.nt_exact(h, return_witness=True)

        return apnt_via_nt(t, nt, decision_only=decision_only, trace=trace), trace

    if pipeline == "nt-to-zwt":
        def zwt(h):
            dump("zwt", h)
            return oracles.zwt_exact(h)

        return nt_via_zwt(source, zwt, trace=trace), trace

    if pipeline == "apsp-to-zwt":
        def zwt_leaf(h):
            dump("zwt", h)
            return oracles.zwt_exact(h, return_witness=True)

        def zwt_decision(h):
            dump("zwt", h)
            return oracles.zwt_exact(h)

        def nt(h):
            if decision_only:
                return nt_via_zwt(h, zwt_decision, trace=trace)
            return nt_via_zwt(h, zwt_leaf, want_witness=True, trace=trace)

        def apnt(t):
            dump("apnt", t)
            return apnt_via_nt(t, nt, decision_only=decision_only, trace=trace)

        def mm(a, b):
            return minplus_via_apnt(a, b, apnt, trace=trace)

        return apsp_via_minplus(source, mm, trace=trace), trace

    raise ValueError(f"unknown pipeline {pipeline!r}; expected one of {PIPELINES}")
