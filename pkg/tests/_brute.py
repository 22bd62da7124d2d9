"""Brute-force oracles for the tests, independent of the library's solvers.

Everything here is plain-Python enumeration over itertools combinations so a
bug in the library's vectorized code cannot hide in the expected values.
"""

from itertools import combinations, combinations_with_replacement, permutations

from fgt import INF


def triangle_triples(n):
    return combinations(range(n), 3)


def enumerate_triangle_weights(w):
    """Yield (triple, weight sum) for every all-finite vertex triple."""
    n = len(w)
    for a, b, c in triangle_triples(n):
        if w[a][b] != INF and w[b][c] != INF and w[a][c] != INF:
            yield (a, b, c), int(w[a][b]) + int(w[b][c]) + int(w[a][c])


def has_negative_triangle(w):
    return any(s < 0 for _, s in enumerate_triangle_weights(w))


def has_zero_triangle(w):
    return any(s == 0 for _, s in enumerate_triangle_weights(w))


def count_triangles(adj):
    n = len(adj)
    return sum(
        1
        for a, b, c in triangle_triples(n)
        if adj[a][b] and adj[b][c] and adj[a][c]
    )


def colour_counts(adj, gamma, distinct):
    """Triangle count per colour multiset by full enumeration."""
    counts = {}
    n = len(adj)
    for a, b, c in triangle_triples(n):
        if adj[a][b] and adj[b][c] and adj[a][c]:
            key = tuple(sorted((int(gamma[a]), int(gamma[b]), int(gamma[c]))))
            if distinct and len(set(key)) != 3:
                continue
            counts[key] = counts.get(key, 0) + 1
    return counts


def dmt_brute(adj, gamma, num_colours, delta, distinct):
    if delta > len(adj) ** 3:
        return False
    if delta == 0:
        return num_colours >= (3 if distinct else 1)
    return any(v >= delta for v in colour_counts(adj, gamma, distinct).values())


def tc_brute(adj, gamma, num_colours, distinct):
    counts = colour_counts(adj, gamma, distinct)
    triples = (
        combinations(range(num_colours), 3)
        if distinct
        else combinations_with_replacement(range(num_colours), 3)
    )
    return all(counts.get(t, 0) >= 1 for t in triples)


def shortest_paths_bellman_ford(w):
    """All-pairs distances by per-source Bellman-Ford; None on negative cycle."""
    n = len(w)
    dist = [[INF] * n for _ in range(n)]
    for s in range(n):
        d = [INF] * n
        d[s] = 0
        for _ in range(n - 1):
            changed = False
            for u in range(n):
                if d[u] == INF:
                    continue
                for v in range(n):
                    if w[u][v] != INF and d[u] + w[u][v] < d[v]:
                        d[v] = d[u] + w[u][v]
                        changed = True
            if not changed:
                break
        for u in range(n):
            if d[u] == INF:
                continue
            for v in range(n):
                if w[u][v] != INF and d[u] + w[u][v] < d[v]:
                    return None
        dist[s] = d
    return dist


def minplus_brute(m, n_mat):
    dim = len(m)
    out = [[INF] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            best = INF
            for k in range(dim):
                if m[i][k] != INF and n_mat[k][j] != INF:
                    best = min(best, int(m[i][k]) + int(n_mat[k][j]))
            out[i][j] = best
    return out


def apnt_brute(w, parts):
    """Pair flags by full triple enumeration over the three parts."""
    idx = {p: [v for v in range(len(parts)) if parts[v] == p] for p in range(3)}
    flags = [[False] * len(idx[1]) for _ in range(len(idx[0]))]
    for ia, a in enumerate(idx[0]):
        for ib, b in enumerate(idx[1]):
            if w[a][b] == INF:
                continue
            for c in idx[2]:
                if w[b][c] == INF or w[a][c] == INF:
                    continue
                if int(w[a][b]) + int(w[b][c]) + int(w[a][c]) < 0:
                    flags[ia][ib] = True
                    break
    return flags


def ordered_colour_triples(num_colours):
    return [(i, j, k) for i in range(num_colours)
            for j in range(num_colours) for k in range(num_colours)]
