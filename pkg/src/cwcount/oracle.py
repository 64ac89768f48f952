"""Exhaustive ground truth on small graphs.

Everything here enumerates actual edge and vertex sets of an evaluated
:class:`~cwcount.expression.LabeledGraph` and classifies them; nothing is
shared with the dynamic programs except the pair-vector layout. Size caps
default to 10 vertices for matching objects and 8 for path objects and can
be raised with the ``CWCOUNT_ORACLE_MAX`` environment variable.
"""

from __future__ import annotations

import os
from collections import Counter, defaultdict
from itertools import combinations
from typing import Iterator

from .core import pair_index
from .expression import LabeledGraph

MATCHING_CAP = 10
PATH_CAP = 8


class OracleSizeError(ValueError):
    pass


def _check_size(g: LabeledGraph, default: int) -> None:
    env = os.environ.get("CWCOUNT_ORACLE_MAX")
    cap = int(env) if env else default
    if g.n > cap:
        raise OracleSizeError(f"graph has {g.n} vertices; oracle cap is {cap} (set CWCOUNT_ORACLE_MAX)")


def iter_matchings(g: LabeledGraph) -> Iterator[tuple[tuple[int, int], ...]]:
    """Every matching, as a tuple of edges, by include/exclude search over the edge list."""
    edges = g.sorted_edges()
    used = [False] * g.n
    chosen: list[tuple[int, int]] = []

    def rec(pos: int):
        if pos == len(edges):
            yield tuple(chosen)
            return
        yield from rec(pos + 1)
        u, v = edges[pos]
        if not used[u] and not used[v]:
            used[u] = used[v] = True
            chosen.append((u, v))
            yield from rec(pos + 1)
            chosen.pop()
            used[u] = used[v] = False

    yield from rec(0)


def _per_label(g: LabeledGraph, vertices) -> tuple[int, ...]:
    counts = [0] * g.width
    for v in vertices:
        counts[g.labels[v] - 1] += 1
    return tuple(counts)


def enumerate_matchings(g: LabeledGraph) -> dict[tuple[int, ...], int]:
    """Matchings classified by matched vertices per label."""
    _check_size(g, MATCHING_CAP)
    out: Counter = Counter()
    for m in iter_matchings(g):
        out[_per_label(g, [x for e in m for x in e])] += 1
    return dict(out)


def matchings_by_size(g: LabeledGraph) -> dict[int, int]:
    _check_size(g, MATCHING_CAP)
    return dict(sorted(Counter(len(m) for m in iter_matchings(g)).items()))


def is_matching_cover_pair(g: LabeledGraph, m, c) -> bool:
    matched = [x for e in m for x in e]
    if len(set(matched)) != len(matched) or any(tuple(sorted(e)) not in g.edges for e in m):
        return False
    covered = set(matched)
    if covered & set(c):
        return False
    covered |= set(c)
    return all(u in covered or v in covered for u, v in g.edges)


def enumerate_mc(g: LabeledGraph) -> dict[tuple[tuple[int, ...], tuple[int, ...]], int]:
    """Matching-cover pairs classified by ``(M, C)``."""
    _check_size(g, MATCHING_CAP)
    out: Counter = Counter()
    for m in iter_matchings(g):
        matched = {x for e in m for x in e}
        free = [v for v in range(g.n) if v not in matched]
        key_m = _per_label(g, matched)
        # edges that the cover still has to hit
        open_edges = [(u, v) for u, v in g.edges if u not in matched and v not in matched]
        for r in range(len(free) + 1):
            for c in combinations(free, r):
                cs = set(c)
                if all(u in cs or v in cs for u, v in open_edges):
                    out[key_m, _per_label(g, c)] += 1
    return dict(out)


def enumerate_maximal_matchings(g: LabeledGraph) -> dict[int, int]:
    _check_size(g, MATCHING_CAP)
    out: Counter = Counter()
    for m in iter_matchings(g):
        matched = {x for e in m for x in e}
        if all(u in matched or v in matched for u, v in g.edges):
            out[len(m)] += 1
    return dict(sorted(out.items()))


def perfect_matching_count(g: LabeledGraph) -> int:
    _check_size(g, MATCHING_CAP)
    return sum(1 for m in iter_matchings(g) if 2 * len(m) == g.n)


# --------------------------------------------------------------------------
# path matchings


class _Forest:
    """Union-find plus degrees, with undo, for growing linear forests edge by edge."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.degree = [0] * n

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def try_add(self, u: int, v: int):
        if self.degree[u] >= 2 or self.degree[v] >= 2:
            return None
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return None
        self.parent[ru] = rv
        self.degree[u] += 1
        self.degree[v] += 1
        return ru

    def undo(self, u: int, v: int, token: int) -> None:
        self.parent[token] = token
        self.degree[u] -= 1
        self.degree[v] -= 1


def iter_path_matchings(g: LabeledGraph, base=(), candidates=None) -> Iterator[tuple[tuple[int, int], ...]]:
    """Every linear forest ``base + S`` with ``S`` a subset of ``candidates`` (default: all edges)."""
    forest = _Forest(g.n)
    for u, v in base:
        if forest.try_add(u, v) is None:
            raise ValueError(f"base edge set is not a path matching at {(u, v)}")
    edges = sorted(g.edges) if candidates is None else sorted(candidates)
    chosen: list[tuple[int, int]] = list(base)

    def rec(pos: int):
        if pos == len(edges):
            yield tuple(chosen)
            return
        yield from rec(pos + 1)
        u, v = edges[pos]
        token = forest.try_add(u, v)
        if token is not None:
            chosen.append((u, v))
            yield from rec(pos + 1)
            chosen.pop()
            forest.undo(u, v, token)

    yield from rec(0)


def is_path_matching(n: int, edges) -> bool:
    degree = [0] * n
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    if any(d > 2 for d in degree):
        return False
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def path_endpoints(n: int, edges) -> tuple[list[int], list[tuple[int, int]]]:
    """Uncovered vertices and the extremity pair of each path of a linear forest."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    uncovered = [v for v in range(n) if not adj[v]]
    seen = set()
    ends = []
    for start in range(n):
        if len(adj[start]) != 1 or start in seen:
            continue
        prev, cur = None, start
        while True:
            seen.add(cur)
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
        ends.append((start, cur))
    return uncovered, ends


def classify_pm(g: LabeledGraph, edges) -> tuple[int, ...]:
    idx = pair_index(g.width)
    vec = [0] * idx.size
    uncovered, ends = path_endpoints(g.n, edges)
    for v in uncovered:
        vec[idx.index(0, g.labels[v])] += 1
    for x, y in ends:
        vec[idx.index(g.labels[x], g.labels[y])] += 1
    return tuple(vec)


def enumerate_pm(g: LabeledGraph) -> dict[tuple[int, ...], int]:
    """Path matchings (including the empty one) classified by pair vector."""
    _check_size(g, PATH_CAP)
    return dict(Counter(classify_pm(g, p) for p in iter_path_matchings(g)))


def new_edges(g: LabeledGraph, i: int, j: int) -> list[tuple[int, int]]:
    out = []
    for u in g.vertices_with_label(i):
        for v in g.vertices_with_label(j):
            e = (min(u, v), max(u, v))
            if e in g.edges:
                raise ValueError(f"vertices {e} of labels {i},{j} are already adjacent")
            out.append(e)
    return out


def enumerate_extensions(g_prime: LabeledGraph, p_prime, i: int, j: int) -> dict[tuple[int, ...], int]:
    """Extensions of ``p_prime`` across the edges added by joining labels ``i`` and ``j``, by class."""
    _check_size(g_prime, PATH_CAP)
    if i == j:
        raise ValueError("edge creation needs two distinct labels")
    if not is_path_matching(g_prime.n, p_prime) or any(tuple(sorted(e)) not in g_prime.edges for e in p_prime):
        raise ValueError("p_prime is not a path matching of g_prime")
    added = new_edges(g_prime, i, j)
    joined = LabeledGraph(g_prime.labels, g_prime.edges | frozenset(added), g_prime.width)
    return dict(Counter(classify_pm(joined, p) for p in iter_path_matchings(joined, p_prime, added)))


def enumerate_paths(g: LabeledGraph) -> int:
    """Simple paths with at least one edge; each path is counted once, not once per direction."""
    _check_size(g, PATH_CAP)
    adj = g.adjacency()
    on_path = [False] * g.n
    directed = 0

    def dfs(v: int) -> int:
        total = 0
        on_path[v] = True
        for w in adj[v]:
            if not on_path[w]:
                total += 1 + dfs(w)
        on_path[v] = False
        return total

    for s in range(g.n):
        directed += dfs(s)
    return directed // 2


def path_matchings_by_witness(g: LabeledGraph) -> dict[tuple[int, ...], list[tuple]]:
    """Group every path matching of ``g`` by its class."""
    groups: dict = defaultdict(list)
    for p in iter_path_matchings(g):
        groups[classify_pm(g, p)].append(p)
    return dict(groups)
