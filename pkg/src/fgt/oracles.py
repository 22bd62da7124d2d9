"""Exact reference solvers: ground truth for every differential test.

All solvers are straightforward cubic-or-worse dynamic programming or
enumeration, vectorized with numpy but algorithmically naive on purpose.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import resolve_distinct
from .errors import DimensionMismatch, InternalInconsistency, NegativeCycle
from .instances import (
    INF,
    ColouredGraph,
    MinPlusMatrix,
    TripartiteGraph,
    WeightedGraph,
    sat_add,
)


@dataclass(frozen=True)
class ApspResult:
    """All-pairs distances; INF marks unreachable pairs."""

    dist: np.ndarray

    def __post_init__(self):
        self.dist.setflags(write=False)

    @property
    def n(self) -> int:
        return self.dist.shape[0]


@dataclass(frozen=True)
class PairFlags:
    """Boolean matrix over A x B: (a, b) flags a completing negative triangle."""

    flags: np.ndarray

    def __post_init__(self):
        self.flags.setflags(write=False)


def apsp_exact(g: WeightedGraph) -> ApspResult:
    """All-pairs shortest distances by the classic relax-over-intermediates DP.

    Raises NegativeCycle if the final pass leaves a negative diagonal entry.
    """
    d = g.w.astype(np.int64, copy=True)
    for k in range(g.n):
        via = sat_add(d[:, k : k + 1], d[k : k + 1, :])
        np.minimum(d, via, out=d)
    if (np.diag(d) < 0).any():
        raise NegativeCycle("negative diagonal after final relaxation pass")
    return ApspResult(dist=d)


def minplus_exact(m: MinPlusMatrix, n: MinPlusMatrix) -> MinPlusMatrix:
    """Distance product by the naive triple loop, INF-saturating."""
    if m.n != n.n:
        raise DimensionMismatch(f"{m.n} vs {n.n}")
    sums = sat_add(m.m[:, :, None], n.m[None, :, :])
    out = sums.min(axis=1)
    return MinPlusMatrix.from_entries(out, min_c=max(m.c, n.c))


def apnt_exact(t: TripartiteGraph) -> PairFlags:
    """flags[a, b] = exists c in C closing a negative triangle with (a, b)."""
    w_ab = t.block(0, 1)
    w_bc = t.block(1, 2)
    w_ac = t.block(0, 2)
    # best[a, b] = min over c of w(b, c) + w(a, c), saturating.
    sums = sat_add(w_bc[None, :, :], w_ac[:, None, :])
    best = sums.min(axis=2) if sums.shape[2] else np.full(sums.shape[:2], INF, dtype=np.int64)
    total = sat_add(w_ab, best)
    return PairFlags(flags=total < 0)


@lru_cache(maxsize=32)
def _strict_triple_mask(n: int) -> np.ndarray:
    i, j, k = np.ogrid[:n, :n, :n]
    mask = (i < j) & (j < k)
    mask.setflags(write=False)
    return mask


def _triangle_sums(w: np.ndarray) -> np.ndarray:
    # sums[i, j, k] = w[i,j] + w[i,k] + w[j,k]; any INF operand keeps the sum
    # far above every finite triangle weight, so sign/zero tests need no mask.
    s = np.add(w[:, :, None], w[:, None, :])
    s += w[None, :, :]
    return s


def _triangle_search(g: WeightedGraph, predicate, return_witness: bool):
    if g.directed:
        raise ValueError("triangle problems are defined on undirected graphs")
    sums = _triangle_sums(g.w)
    hit = predicate(sums)
    hit &= _strict_triple_mask(g.n)
    found = bool(hit.any())
    if not return_witness:
        return found
    if not found:
        return False, None
    a, b, c = np.unravel_index(int(np.argmax(hit)), hit.shape)
    return True, (int(a), int(b), int(c))


def nt_exact(g: WeightedGraph, return_witness: bool = False):
    """True iff some unordered triple has all edges finite and weight sum < 0."""
    return _triangle_search(g, lambda s: s < 0, return_witness)


def zwt_exact(g: WeightedGraph, return_witness: bool = False):
    """True iff some triangle's weight sum is exactly 0."""
    return _triangle_search(g, lambda s: s == 0, return_witness)


def count_triangles_per_triple(
    g: ColouredGraph, distinct: bool | None = None
) -> dict[tuple[int, int, int], int]:
    """Exact per-colour-multiset triangle counts via neighbourhood enumeration.

    Multisets absent from the map have count 0.  With the distinct-triples
    convention, triangles whose colour multiset repeats a colour are ignored.
    """
    distinct = resolve_distinct(distinct)
    counts: dict[tuple[int, int, int], int] = {}
    adj = g.adj
    gamma = g.gamma
    for a in range(g.n):
        row_a = adj[a]
        for b in range(a + 1, g.n):
            if not row_a[b]:
                continue
            common = np.flatnonzero((row_a != 0) & (adj[b] != 0))
            for c in common[common > b]:
                key = tuple(sorted((int(gamma[a]), int(gamma[b]), int(gamma[c]))))
                if distinct and len(set(key)) != 3:
                    continue
                counts[key] = counts.get(key, 0) + 1
    return counts


def admissible_triples_exist(num_colours: int, distinct: bool | None = None) -> bool:
    """Whether the colour-triple domain is nonempty under the convention."""
    return num_colours >= (3 if resolve_distinct(distinct) else 1)


def dmt_exact(g: ColouredGraph, delta: int, distinct: bool | None = None) -> bool:
    """True iff some admissible colour multiset hosts at least `delta` triangles."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if delta > g.n**3:
        return False
    if delta == 0:
        return admissible_triples_exist(g.num_colours, distinct)
    counts = count_triangles_per_triple(g, distinct)
    return any(v >= delta for v in counts.values())


def tc_exact(g: ColouredGraph, distinct: bool | None = None) -> bool:
    """True iff every admissible colour multiset hosts at least one triangle."""
    from itertools import combinations, combinations_with_replacement

    distinct = resolve_distinct(distinct)
    counts = count_triangles_per_triple(g, distinct)
    triples = (
        combinations(range(g.num_colours), 3)
        if distinct
        else combinations_with_replacement(range(g.num_colours), 3)
    )
    return all(counts.get(t, 0) >= 1 for t in triples)


def trace_count_triangles(adj: np.ndarray) -> int:
    """Exact triangle count as trace(A^3) / 6.

    The product runs in float64 (values stay far below 2^53, so it is exact);
    a trace not divisible by 6 signals a broken product.
    """
    a = np.asarray(adj)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("adjacency must be square")
    if not np.array_equal(a, a.T) or (np.diag(a) != 0).any():
        raise ValueError("adjacency must be symmetric with zero diagonal")
    f = a.astype(np.float64)
    cube = f @ f @ f
    trace = float(np.trace(cube))
    t = int(round(trace))
    if abs(trace - t) > 1e-6 or t % 6 != 0:
        raise InternalInconsistency(f"trace(A^3) = {trace} not divisible by 6")
    return t // 6
