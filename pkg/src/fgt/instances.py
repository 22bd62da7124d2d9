"""Problem-instance types, random/planted generators, and text serialization.

All weight matrices are ``int64`` numpy arrays using the sentinel :data:`INF`
for missing edges.  The sentinel is far above any sum of desk-scale weights,
and :func:`sat_add` keeps arithmetic saturating at it, so min-plus algebra
stays in plain machine integers.

Text formats (UTF-8, LF endings):

* weighted:  ``fgt-weighted v1 <n> <c> <directed>`` then ``n`` rows of ``n``
  integer-or-``inf`` tokens;
* coloured:  ``fgt-coloured v1 <n> <numColours>``, a row of ``n`` colour ids,
  then ``n`` rows of ``n`` tokens in ``{0,1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InvalidColourCount, ParseError, PlantInfeasible

# Sentinel for "no edge".  2**61 leaves headroom: INF + INF and 3*INF stay
# inside int64, and any sum of up to n finite desk-scale weights is far below.
INF: int = 1 << 61


def sat_add(a, b):
    """Elementwise a + b saturating at INF (either operand INF => INF)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return np.where((a == INF) | (b == INF), INF, a + b)


def weight_bound(n: int, c: float) -> int:
    """Largest admissible |weight| for an n-node instance with exponent c.

    The base is max(n, 2) so that 1x1 and 2x2 instances can still carry
    non-unit weights; the small epsilon absorbs float fuzz when c was
    derived from a log ratio.
    """
    if c <= 0:
        raise ValueError("weight-range exponent must be positive")
    return int(math.ceil(max(n, 2) ** c - 1e-9))


def fit_exponent(n: int, max_abs: int, floor_c: float = 1.0) -> float:
    """Smallest exponent >= floor_c whose bound admits |weights| <= max_abs."""
    c = floor_c
    if max_abs > weight_bound(n, c):
        c = math.log(max_abs) / math.log(max(n, 2))
        while weight_bound(n, c) < max_abs:
            c *= 1.0 + 1e-12
    return c


def _as_int64(m, name: str) -> np.ndarray:
    arr = np.array(m, dtype=np.int64, copy=True)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    arr.setflags(write=False)
    return arr


def _finite_abs_max(m: np.ndarray) -> int:
    finite = m[m != INF]
    return int(np.abs(finite).max()) if finite.size else 0


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """n-node weighted graph as an n x n matrix with INF for missing edges.

    Diagonal entries are 0, finite weights stay within the range bound for
    (n, c), and undirected graphs have symmetric matrices.  Instances are
    immutable once constructed.
    """

    n: int
    c: float
    w: np.ndarray
    directed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "w", _as_int64(self.w, "w"))
        if self.n < 1 or self.w.shape != (self.n, self.n):
            raise ValueError("weight matrix shape does not match n")
        if (np.diag(self.w) != 0).any():
            raise ValueError("diagonal entries must be 0")
        bound = weight_bound(self.n, self.c)
        if _finite_abs_max(self.w) > bound:
            raise ValueError(f"finite weight exceeds bound {bound}")
        if not self.directed and not np.array_equal(self.w, self.w.T):
            raise ValueError("undirected graph requires a symmetric matrix")
        if 3 * self.n * bound >= INF:
            raise ValueError("instance too large for the INF sentinel")

    @classmethod
    def from_weights(cls, w, directed: bool, min_c: float = 1.0) -> "WeightedGraph":
        """Build a graph fitting the exponent to the actual weight range."""
        arr = np.array(w, dtype=np.int64)
        n = arr.shape[0]
        c = fit_exponent(n, _finite_abs_max(arr), min_c)
        return cls(n=n, c=c, w=arr, directed=directed)

    @classmethod
    def _trusted(cls, n: int, c: float, w: np.ndarray, directed: bool) -> "WeightedGraph":
        # Hot-path constructor for instances built by the reductions
        # themselves; skips copying and validation.  The caller owns the
        # array and must not mutate it while the instance is in use.
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "c", c)
        object.__setattr__(obj, "w", w)
        object.__setattr__(obj, "directed", directed)
        return obj

    @property
    def bound(self) -> int:
        return weight_bound(self.n, self.c)

    def delete_vertex(self, v: int) -> "WeightedGraph":
        keep = [i for i in range(self.n) if i != v]
        sub = self.w[np.ix_(keep, keep)]
        return WeightedGraph.from_weights(sub, directed=self.directed, min_c=1.0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WeightedGraph)
            and self.n == other.n
            and self.c == other.c
            and self.directed == other.directed
            and np.array_equal(self.w, other.w)
        )


@dataclass(frozen=True, eq=False)
class MinPlusMatrix:
    """Square integer matrix with INF entries; operand of the distance product.

    Inputs of the product keep entries within the (n, c) bound; products may
    use up to twice that, which the validator permits.
    """

    n: int
    c: float
    m: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m", _as_int64(self.m, "m"))
        if self.n < 1 or self.m.shape != (self.n, self.n):
            raise ValueError("matrix shape does not match n")
        bound = weight_bound(self.n, self.c)
        if _finite_abs_max(self.m) > 2 * bound:
            raise ValueError(f"entry exceeds result headroom {2 * bound}")

    @classmethod
    def from_entries(cls, m, min_c: float = 1.0) -> "MinPlusMatrix":
        arr = np.array(m, dtype=np.int64)
        n = arr.shape[0]
        c = fit_exponent(n, _finite_abs_max(arr), min_c)
        return cls(n=n, c=c, m=arr)

    @classmethod
    def identity(cls, n: int, c: float = 1.0) -> "MinPlusMatrix":
        """Min-plus identity: 0 on the diagonal, INF elsewhere."""
        m = np.full((n, n), INF, dtype=np.int64)
        np.fill_diagonal(m, 0)
        return cls(n=n, c=c, m=m)

    @property
    def bound(self) -> int:
        return weight_bound(self.n, self.c)

    def delete_index(self, k: int) -> "MinPlusMatrix":
        keep = [i for i in range(self.n) if i != k]
        return MinPlusMatrix.from_entries(self.m[np.ix_(keep, keep)], min_c=1.0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MinPlusMatrix)
            and self.n == other.n
            and self.c == other.c
            and np.array_equal(self.m, other.m)
        )


@dataclass(frozen=True, eq=False)
class ColouredGraph:
    """Undirected simple graph plus a vertex colouring gamma: V -> [numColours)."""

    n: int
    num_colours: int
    adj: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        adj = np.array(self.adj, dtype=np.int8, copy=True)
        gamma = np.array(self.gamma, dtype=np.int64, copy=True)
        adj.setflags(write=False)
        gamma.setflags(write=False)
        object.__setattr__(self, "adj", adj)
        object.__setattr__(self, "gamma", gamma)
        if self.n < 1 or adj.shape != (self.n, self.n):
            raise ValueError("adjacency shape does not match n")
        if gamma.shape != (self.n,):
            raise ValueError("colouring length does not match n")
        if not (1 <= self.num_colours <= self.n):
            raise InvalidColourCount(
                f"numColours={self.num_colours} outside [1, n={self.n}]"
            )
        if ((adj != 0) & (adj != 1)).any():
            raise ValueError("adjacency entries must be 0/1")
        if (np.diag(adj) != 0).any():
            raise ValueError("adjacency diagonal must be 0")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        if gamma.min() < 0 or gamma.max() >= self.num_colours:
            raise ValueError("colour id outside [0, numColours)")

    @property
    def class_sizes(self) -> np.ndarray:
        return np.bincount(self.gamma, minlength=self.num_colours)

    def delete_vertex(self, v: int) -> "ColouredGraph":
        keep = [i for i in range(self.n) if i != v]
        return ColouredGraph(
            n=self.n - 1,
            num_colours=min(self.num_colours, self.n - 1),
            adj=self.adj[np.ix_(keep, keep)],
            gamma=np.minimum(self.gamma[keep], min(self.num_colours, self.n - 1) - 1),
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ColouredGraph)
            and self.n == other.n
            and self.num_colours == other.num_colours
            and np.array_equal(self.adj, other.adj)
            and np.array_equal(self.gamma, other.gamma)
        )


@dataclass(frozen=True, eq=False)
class TripartiteGraph:
    """Weighted graph whose vertices carry a part label in {0, 1, 2} = {A, B, C}.

    Finite off-diagonal weights may only connect distinct parts.
    """

    graph: WeightedGraph
    parts: np.ndarray

    def __post_init__(self):
        parts = np.array(self.parts, dtype=np.int64, copy=True)
        parts.setflags(write=False)
        object.__setattr__(self, "parts", parts)
        if parts.shape != (self.graph.n,):
            raise ValueError("part labels length does not match n")
        if parts.size and (parts.min() < 0 or parts.max() > 2):
            raise ValueError("part labels must be in {0, 1, 2}")
        same = parts[:, None] == parts[None, :]
        offdiag = ~np.eye(self.graph.n, dtype=bool)
        if ((self.graph.w != INF) & same & offdiag).any():
            raise ValueError("finite weight inside a part")

    @classmethod
    def from_blocks(cls, w_ab, w_bc, w_ac, min_c: float = 1.0) -> "TripartiteGraph":
        """Assemble a tripartite instance from the three inter-part blocks."""
        w_ab = np.asarray(w_ab, dtype=np.int64)
        w_bc = np.asarray(w_bc, dtype=np.int64)
        w_ac = np.asarray(w_ac, dtype=np.int64)
        na, nb = w_ab.shape
        nc = w_bc.shape[1]
        if w_bc.shape[0] != nb or w_ac.shape != (na, nc):
            raise ValueError("block shapes are inconsistent")
        n = na + nb + nc
        w = np.full((n, n), INF, dtype=np.int64)
        np.fill_diagonal(w, 0)
        w[:na, na : na + nb] = w_ab
        w[na : na + nb, :na] = w_ab.T
        w[na : na + nb, na + nb :] = w_bc
        w[na + nb :, na : na + nb] = w_bc.T
        w[:na, na + nb :] = w_ac
        w[na + nb :, :na] = w_ac.T
        parts = np.repeat([0, 1, 2], [na, nb, nc])
        return cls(graph=WeightedGraph.from_weights(w, directed=False, min_c=min_c), parts=parts)

    def part_vertices(self, p: int) -> np.ndarray:
        return np.flatnonzero(self.parts == p)

    @property
    def part_sizes(self) -> tuple[int, int, int]:
        return tuple(int((self.parts == p).sum()) for p in range(3))

    def block(self, p: int, q: int) -> np.ndarray:
        return self.graph.w[np.ix_(self.part_vertices(p), self.part_vertices(q))]

    def delete_vertex(self, v: int) -> "TripartiteGraph":
        keep = [i for i in range(self.graph.n) if i != v]
        sub = self.graph.w[np.ix_(keep, keep)]
        return TripartiteGraph(
            graph=WeightedGraph.from_weights(sub, directed=False, min_c=1.0),
            parts=self.parts[keep],
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TripartiteGraph)
            and self.graph == other.graph
            and np.array_equal(self.parts, other.parts)
        )


@dataclass(frozen=True)
class ColourBuckets:
    """Colour classes laid out contiguously: bucket i is a slice of `order`.

    Random access to the a-th element of a bucket is a constant-cost array
    index, mirroring the hash-bucket layout the search algorithms assume.
    """

    order: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        self.order.setflags(write=False)
        self.offsets.setflags(write=False)

    @property
    def num_buckets(self) -> int:
        return len(self.offsets) - 1

    def bucket(self, i: int) -> np.ndarray:
        return self.order[self.offsets[i] : self.offsets[i + 1]]

    def size(self, i: int) -> int:
        return int(self.offsets[i + 1] - self.offsets[i])

    @property
    def sizes(self) -> np.ndarray:
        return np.diff(self.offsets)


class PlantedDmt(NamedTuple):
    """A planted instance together with its recorded ground truth."""

    graph: ColouredGraph
    planted_delta: int
    triple: tuple[int, int, int]


# ---------------------------------------------------------------------------
# Generators (pure functions of their arguments)
# ---------------------------------------------------------------------------


def gen_weighted_graph(
    n: int, c: float = 1.0, density: float = 0.5, seed: int = 0, directed: bool = True
) -> WeightedGraph:
    """Random weighted graph: each pair gets a uniform weight with prob `density`.

    Directed graphs sample every ordered pair independently; undirected ones
    sample unordered pairs and mirror the weight.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= density <= 1:
        raise ValueError("density must be a probability")
    rng = np.random.default_rng(seed)
    b = weight_bound(n, c)
    w = np.full((n, n), INF, dtype=np.int64)
    np.fill_diagonal(w, 0)
    if directed:
        present = rng.random((n, n)) < density
        vals = rng.integers(-b, b + 1, size=(n, n), dtype=np.int64)
        off = ~np.eye(n, dtype=bool)
        w[present & off] = vals[present & off]
    else:
        iu = np.triu_indices(n, k=1)
        present = rng.random(len(iu[0])) < density
        vals = rng.integers(-b, b + 1, size=len(iu[0]), dtype=np.int64)
        w[iu[0][present], iu[1][present]] = vals[present]
        w[iu[1][present], iu[0][present]] = vals[present]
    return WeightedGraph(n=n, c=c, w=w, directed=directed)


def gen_apsp_instance(n: int, c: float = 1.0, density: float = 0.5, seed: int = 0) -> WeightedGraph:
    """Directed instance free of negative cycles, with plenty of negative edges.

    Nonnegative base lengths are reweighted by a random vertex potential;
    potentials telescope around every cycle, so cycle sums stay nonnegative
    while individual edges can go negative.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    b = weight_bound(n, c)
    base_hi = max(1, (b + 1) // 2)
    q = max(0, b // 4)
    phi = rng.integers(-q, q + 1, size=n, dtype=np.int64)
    w = np.full((n, n), INF, dtype=np.int64)
    np.fill_diagonal(w, 0)
    present = rng.random((n, n)) < density
    base = rng.integers(0, base_hi + 1, size=(n, n), dtype=np.int64)
    off = ~np.eye(n, dtype=bool)
    mask = present & off
    shifted = base + phi[:, None] - phi[None, :]
    w[mask] = shifted[mask]
    return WeightedGraph(n=n, c=c, w=w, directed=True)


def gen_minplus(n: int, c: float = 1.0, density: float = 1.0, seed: int = 0) -> MinPlusMatrix:
    """Random distance-product operand with entries in [-bound, bound] or INF."""
    rng = np.random.default_rng(seed)
    b = weight_bound(n, c)
    m = np.where(
        rng.random((n, n)) < density,
        rng.integers(-b, b + 1, size=(n, n), dtype=np.int64),
        INF,
    ).astype(np.int64)
    return MinPlusMatrix(n=n, c=c, m=m)


def gen_tripartite(
    n_a: int, n_b: int, n_c: int, c: float = 1.0, density: float = 0.7, seed: int = 0
) -> TripartiteGraph:
    """Random tripartite weighted instance with inter-part edges only."""
    rng = np.random.default_rng(seed)
    n = n_a + n_b + n_c
    b = weight_bound(n, c)

    def blk(rows, cols):
        vals = rng.integers(-b, b + 1, size=(rows, cols), dtype=np.int64)
        return np.where(rng.random((rows, cols)) < density, vals, INF).astype(np.int64)

    return TripartiteGraph.from_blocks(blk(n_a, n_b), blk(n_b, n_c), blk(n_a, n_c), min_c=c)


def gen_coloured_graph(n: int, num_colours: int, edge_prob: float = 0.5, seed: int = 0) -> ColouredGraph:
    """Random coloured graph; colours round-robin then shuffled by the seed.

    Round-robin assignment guarantees every colour class is nonempty when
    num_colours <= n.
    """
    if not 1 <= num_colours <= n:
        raise InvalidColourCount(f"numColours={num_colours} outside [1, n={n}]")
    rng = np.random.default_rng(seed)
    gamma = np.arange(n, dtype=np.int64) % num_colours
    gamma = gamma[rng.permutation(n)]
    adj = np.zeros((n, n), dtype=np.int8)
    iu = np.triu_indices(n, k=1)
    present = rng.random(len(iu[0])) < edge_prob
    adj[iu[0][present], iu[1][present]] = 1
    adj[iu[1][present], iu[0][present]] = 1
    return ColouredGraph(n=n, num_colours=num_colours, adj=adj, gamma=gamma)


def gen_planted_dmt(
    n: int,
    num_colours: int,
    delta: int,
    triple: tuple[int, int, int],
    seed: int = 0,
    background_prob: float = 0.05,
) -> PlantedDmt:
    """Coloured graph with `delta` vertex-disjoint planted triangles.

    The planted triangles all carry the colour multiset of `triple`; sparse
    random background edges are added on top, so the instance contains at
    least `delta` matching triangles.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if not all(0 <= t < num_colours for t in triple):
        raise InvalidColourCount("triple colour outside [0, numColours)")
    rng = np.random.default_rng(seed)
    gamma = np.arange(n, dtype=np.int64) % num_colours
    gamma = gamma[rng.permutation(n)]

    need: dict[int, int] = {}
    for t in triple:
        need[t] = need.get(t, 0) + delta
    pools = {t: list(np.flatnonzero(gamma == t)) for t in set(triple)}
    for t, req in need.items():
        if len(pools[t]) < req:
            raise PlantInfeasible(
                f"colour class {t} has {len(pools[t])} vertices, needs {req}"
            )

    adj = np.zeros((n, n), dtype=np.int8)
    iu = np.triu_indices(n, k=1)
    present = rng.random(len(iu[0])) < background_prob
    adj[iu[0][present], iu[1][present]] = 1
    adj[iu[1][present], iu[0][present]] = 1

    cursors = {t: 0 for t in pools}
    for _ in range(delta):
        verts = []
        for t in triple:
            verts.append(pools[t][cursors[t]])
            cursors[t] += 1
        for x in range(3):
            for y in range(x + 1, 3):
                adj[verts[x], verts[y]] = 1
                adj[verts[y], verts[x]] = 1
    graph = ColouredGraph(n=n, num_colours=num_colours, adj=adj, gamma=gamma)
    return PlantedDmt(graph=graph, planted_delta=delta, triple=tuple(sorted(triple)))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

_WEIGHTED_MAGIC = "fgt-weighted"
_COLOURED_MAGIC = "fgt-coloured"


def _weight_token(v: int) -> str:
    return "inf" if v == INF else str(int(v))


def serialize(instance) -> str:
    """Render an instance in its text format (LF endings, UTF-8 content)."""
    if isinstance(instance, WeightedGraph):
        lines = [f"{_WEIGHTED_MAGIC} v1 {instance.n} {repr(float(instance.c))} {int(instance.directed)}"]
        for row in instance.w:
            lines.append(" ".join(_weight_token(v) for v in row))
        return "\n".join(lines) + "\n"
    if isinstance(instance, ColouredGraph):
        lines = [f"{_COLOURED_MAGIC} v1 {instance.n} {instance.num_colours}"]
        lines.append(" ".join(str(int(g)) for g in instance.gamma))
        for row in instance.adj:
            lines.append(" ".join(str(int(v)) for v in row))
        return "\n".join(lines) + "\n"
    raise TypeError(f"cannot serialize {type(instance).__name__}")


def _decode(text) -> list[str]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return text.splitlines()


def parse(text) -> WeightedGraph | ColouredGraph:
    """Parse either instance format, dispatching on the header magic."""
    lines = _decode(text)
    if not lines:
        raise ParseError("empty input", 1)
    head = lines[0].split()
    if head[:2] == [_WEIGHTED_MAGIC, "v1"]:
        return parse_weighted(text)
    if head[:2] == [_COLOURED_MAGIC, "v1"]:
        return parse_coloured(text)
    raise ParseError("unrecognised header", 1)


def parse_weighted(text) -> WeightedGraph:
    lines = _decode(text)
    head = lines[0].split() if lines else []
    if len(head) != 5 or head[0] != _WEIGHTED_MAGIC or head[1] != "v1":
        raise ParseError("malformed weighted header", 1)
    try:
        n = int(head[2])
        c = float(head[3])
        directed = {"0": False, "1": True}[head[4]]
    except (ValueError, KeyError):
        raise ParseError("malformed weighted header", 1) from None
    if n < 1 or c <= 0:
        raise ParseError("malformed weighted header", 1)
    if len(lines) < 1 + n:
        raise ParseError(f"expected {n} matrix rows", len(lines) + 1)
    bound = weight_bound(n, c)
    w = np.full((n, n), INF, dtype=np.int64)
    for i in range(n):
        lineno = 2 + i
        toks = lines[1 + i].split()
        if len(toks) != n:
            raise ParseError(f"row has {len(toks)} entries, expected {n}", lineno)
        for j, tok in enumerate(toks):
            if tok == "inf":
                w[i, j] = INF
                continue
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(f"bad weight token {tok!r}", lineno) from None
            if abs(v) > bound:
                raise ParseError(f"weight {v} outside [-{bound}, {bound}]", lineno)
            w[i, j] = v
    for i in range(n):
        if w[i, i] != 0:
            raise ParseError("nonzero diagonal entry", 2 + i)
    if not directed:
        for i in range(n):
            for j in range(i + 1, n):
                if w[i, j] != w[j, i]:
                    raise ParseError("non-symmetric undirected weights", 2 + j)
    return WeightedGraph(n=n, c=c, w=w, directed=directed)


def parse_coloured(text) -> ColouredGraph:
    lines = _decode(text)
    head = lines[0].split() if lines else []
    if len(head) != 4 or head[0] != _COLOURED_MAGIC or head[1] != "v1":
        raise ParseError("malformed coloured header", 1)
    try:
        n = int(head[2])
        num_colours = int(head[3])
    except ValueError:
        raise ParseError("malformed coloured header", 1) from None
    if n < 1 or not 1 <= num_colours <= n:
        raise ParseError("invalid colour count", 1)
    if len(lines) < 2 + n:
        raise ParseError(f"expected colour row plus {n} adjacency rows", len(lines) + 1)
    toks = lines[1].split()
    if len(toks) != n:
        raise ParseError(f"colour row has {len(toks)} entries, expected {n}", 2)
    try:
        gamma = np.array([int(t) for t in toks], dtype=np.int64)
    except ValueError:
        raise ParseError("bad colour token", 2) from None
    if gamma.min() < 0 or gamma.max() >= num_colours:
        raise ParseError("colour id outside [0, numColours)", 2)
    adj = np.zeros((n, n), dtype=np.int8)
    for i in range(n):
        lineno = 3 + i
        toks = lines[2 + i].split()
        if len(toks) != n:
            raise ParseError(f"row has {len(toks)} entries, expected {n}", lineno)
        for j, tok in enumerate(toks):
            if tok not in ("0", "1"):
                raise ParseError(f"adjacency token {tok!r} not in {{0,1}}", lineno)
            adj[i, j] = int(tok)
    for i in range(n):
        if adj[i, i] != 0:
            raise ParseError("nonzero adjacency diagonal", 3 + i)
    for i in range(n):
        for j in range(i + 1, n):
            if adj[i, j] != adj[j, i]:
                raise ParseError("non-symmetric undirected adjacency", 3 + j)
    return ColouredGraph(n=n, num_colours=num_colours, adj=adj, gamma=gamma)
