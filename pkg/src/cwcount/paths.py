"""Path matchings (linear forests) and simple paths over an l-expression.

A path matching is classified by a pair vector ``K`` (see
:class:`~cwcount.core.PairIndex`): ``K[0, b]`` uncovered vertices of label
``b`` and ``K[a, b]`` paths whose two extremities carry labels ``a`` and ``b``.

Edge creation ``(e i j)`` is the hard step. Every path matching of the new
graph restricts to a unique path matching ``P'`` of the child, and the
number of ways to extend ``P'`` into class ``K`` depends only on the class
``K'`` of ``P'``. That number is computed by walking over the label-``i``
vertices that can still take a new edge, one at a time and in a fixed
order (first those whose partner has label ``j``, then the uncovered ones,
then by partner label ``1..l``; both ends of an ``(i, i)``-path together),
deciding which new edges each of them gets. The walk state is the current
class ``K`` plus the vector ``X`` of vertices still to visit.
"""

from __future__ import annotations

from collections import defaultdict
from typing import NamedTuple

from .core import NodeResult, PairIndex, add_vectors, check_width, delta, pair_index, table_convolve
from .expression import Expression, fold, max_label

PMNodeResult = NodeResult


class PathMatchingCount(NamedTuple):
    total: int
    nonempty: int


def pm_singleton(i: int, l: int) -> NodeResult:
    idx = pair_index(l)
    key = [0] * idx.size
    key[idx.index(0, i)] = 1
    return NodeResult({tuple(key): 1}, delta(i, l))


def _rename_map(idx: PairIndex, i: int, j: int) -> list[int]:
    target = []
    for a, b in idx.pairs:
        a, b = (j if a == i else a), (j if b == i else b)
        target.append(idx.index(a, b))
    return target


def pm_rename(r: NodeResult, i: int, j: int) -> NodeResult:
    idx = pair_index(r.width)
    target = _rename_map(idx, i, j)
    out: dict = defaultdict(int)
    for key, w in r.table.items():
        new = [0] * idx.size
        for pos, v in enumerate(key):
            if v:
                new[target[pos]] += v
        out[tuple(new)] += w
    counts = list(r.label_counts)
    counts[j - 1] += counts[i - 1]
    counts[i - 1] = 0
    return NodeResult(dict(out), tuple(counts))


def pm_union(a: NodeResult, b: NodeResult) -> NodeResult:
    check_width(a, b)
    return NodeResult(table_convolve(a.table, b.table), add_vectors(a.label_counts, b.label_counts))


# --------------------------------------------------------------------------
# extension walk


class ExtensionWalk:
    """Transition rules for extending path matchings across ``(e i j)``, ``i < j``.

    ``X`` has one slot per partner class ``0..l``: ``X[k]`` is the number of
    label-``i`` extremities with partner in class ``k`` (uncovered vertices for
    ``k = 0``; twice the number of ``(i, i)``-paths for ``k = i``) that have
    not been visited yet.
    """

    def __init__(self, i: int, j: int, l: int):
        if not 1 <= i < j <= l:
            raise ValueError(f"need 1 <= i < j <= l, got i={i}, j={j}, l={l}")
        self.i, self.j, self.l = i, j, l
        self.idx = pair_index(l)
        self.order = [j, 0] + [k for k in range(1, l + 1) if k != j]
        self._slot = self.idx.index

    def start(self, source: tuple[int, ...]) -> tuple[int, ...]:
        """Initial ``X`` for a child path matching of class ``source``."""
        i, get = self.i, self.idx.get
        x = [get(source, i, k) for k in range(self.l + 1)]
        x[i] = 2 * get(source, i, i)
        return tuple(x)

    def _v(self, K, a: int, b: int) -> int:
        # number of label-a extremities whose partner has label b (b = 0: uncovered)
        if a == b:
            return 2 * K[self._slot(a, a)]
        return K[self._slot(a, b)]

    def _apply(self, K, minus, plus):
        out = list(K)
        for a, b in minus:
            out[self._slot(a, b)] -= 1
        for a, b in plus:
            out[self._slot(a, b)] += 1
        if any(v < 0 for v in out):
            return None
        return tuple(out)

    def steps(self, K: tuple[int, ...], X: tuple[int, ...]) -> list[tuple[int, tuple, tuple]]:
        """Weighted successor states ``(coef, K', X')`` of a non-terminal state."""
        i, j, l = self.i, self.j, self.l
        k = next(c for c in self.order if X[c])
        if k == i and X[i] % 2:
            raise AssertionError(f"odd count of (i,i)-extremities in {X}")
        nxt = list(X)
        nxt[k] -= 2 if k == i else 1
        nxt = tuple(nxt)
        v = self._v
        vj = [0] + [v(K, j, a) for a in range(1, l + 1)]
        v0j = K[self._slot(0, j)]
        moves: list[tuple[int, list, list]] = [(1, [], [])]

        if k == j:
            for a in range(1, l + 1):
                if a != i:
                    moves.append((vj[a], [(i, j)], []))
            moves.append((v(K, i, j) - 1, [(i, j)], []))
            moves.append((v0j, [(i, j), (0, j)], [(j, j)]))
        elif k not in (0, i):
            for a in range(1, l + 1):
                moves.append((vj[a], [(i, k), (j, a)], [(k, a)]))
            moves.append((v0j, [(i, k), (0, j)], [(j, k)]))
        else:
            # uncovered vertex (k = 0) or both ends of an (i,i)-path (k = i):
            # up to two new edges; for k = i each choice can be made at either end
            gone = (0, i) if k == 0 else (i, i)
            two = 2 if k == i else 1
            for a in range(1, l + 1):
                moves.append((two * vj[a], [gone, (j, a)], [(i, a)]))
            moves.append((two * v0j, [gone, (0, j)], [(i, j)]))
            for a in range(1, l + 1):
                for b in range(a + 1, l + 1):
                    moves.append((two * vj[a] * vj[b], [gone, (j, a), (j, b)], [(a, b)]))
            for a in range(1, l + 1):
                moves.append((two * vj[a] * v0j, [gone, (0, j)], []))
            for a in range(1, l + 1):
                if a != j:
                    moves.append((_pairs(vj[a], vj[a] - 1, two), [gone, (j, a), (j, a)], [(a, a)]))
            moves.append((_pairs(v0j, v0j - 1, two), [gone, (0, j), (0, j)], [(j, j)]))
            moves.append((_pairs(vj[j], vj[j] - 2, two), [gone, (j, j)], []))

        out = []
        for coef, minus, plus in moves:
            if coef <= 0:
                continue
            K2 = self._apply(K, minus, plus)
            if K2 is not None:
                out.append((coef, K2, nxt))
        return out


def _pairs(x: int, y: int, two: int) -> int:
    # x*y ordered choices; halved when the two new edges are interchangeable
    prod = x * y
    if two == 2:
        return prod
    if prod <= 0:
        return 0
    assert prod % 2 == 0, f"odd pair product {x}*{y}"
    return prod // 2


def t_value(
    walk: ExtensionWalk,
    target: tuple[int, ...],
    K: tuple[int, ...],
    X: tuple[int, ...],
    memo: dict | None = None,
) -> int:
    """Number of ways to finish the walk from state ``(K, X)`` and land on class ``target``."""
    if memo is None:
        memo = {}
    # iterative post-order so long walks cannot exhaust the recursion limit
    stack = [(K, X)]
    while stack:
        state = stack[-1]
        if state in memo:
            stack.pop()
            continue
        k_cur, x_cur = state
        if not any(x_cur):
            memo[state] = 1 if k_cur == target else 0
            stack.pop()
            continue
        succ = walk.steps(k_cur, x_cur)
        pending = [(k2, x2) for _, k2, x2 in succ if (k2, x2) not in memo]
        if pending:
            stack.extend(pending)
            continue
        memo[state] = sum(c * memo[(k2, x2)] for c, k2, x2 in succ)
        stack.pop()
    return memo[(K, X)]


def derive_N(i: int, j: int, source: tuple[int, ...], target: tuple[int, ...], l: int,
             memo: dict | None = None) -> int:
    """Extensions across ``(e i j)`` of any path matching of class ``source`` that land in ``target``."""
    if i > j:
        i, j = j, i
    walk = ExtensionWalk(i, j, l)
    return t_value(walk, target, source, walk.start(source), memo)


def extension_classes(walk: ExtensionWalk, sources: dict) -> dict:
    """Push weighted source classes through the walk; returns final class -> weighted count.

    States are merged as they meet, processed in decreasing order of
    ``sum(X)``, which every step strictly lowers.
    """
    buckets: dict[int, dict] = defaultdict(lambda: defaultdict(int))
    for K, w in sources.items():
        X = walk.start(K)
        buckets[sum(X)][(K, X)] += w
    result: dict = defaultdict(int)
    while buckets:
        level = max(buckets)
        layer = buckets.pop(level)
        if level == 0:
            for (K, _), w in layer.items():
                result[K] += w
            continue
        for (K, X), w in layer.items():
            for coef, K2, X2 in walk.steps(K, X):
                buckets[sum(X2)][(K2, X2)] += w * coef
    return dict(result)


def pm_edge_create(r: NodeResult, i: int, j: int) -> NodeResult:
    if i > j:
        i, j = j, i
    walk = ExtensionWalk(i, j, r.width)
    out = extension_classes(walk, r.table)
    return NodeResult({K: w for K, w in out.items() if w}, r.label_counts)


def run_pm(expr: Expression, width: int | None = None) -> NodeResult:
    l = width or max_label(expr)
    return fold(expr, lambda i: pm_singleton(i, l), pm_rename, pm_union, pm_edge_create)


def paths_from_root(root: NodeResult) -> int:
    slots = pair_index(root.width).path_slots
    return sum(w for K, w in root.table.items() if sum(K[s] for s in slots) == 1)


def count_paths(expr: Expression, width: int | None = None) -> int:
    """Simple paths with at least one edge, each counted once."""
    return paths_from_root(run_pm(expr, width))


def path_matchings_from_root(root: NodeResult) -> PathMatchingCount:
    slots = pair_index(root.width).path_slots
    total = root.mass
    empty = sum(w for K, w in root.table.items() if not any(K[s] for s in slots))
    return PathMatchingCount(total, total - empty)


def count_path_matchings(expr: Expression, width: int | None = None) -> PathMatchingCount:
    """Total path matchings, with and without the empty one."""
    return path_matchings_from_root(run_pm(expr, width))
