"""Matching-cover pairs, maximal/perfect matchings and plain matchings over an l-expression.

A matching-cover pair ``(m, c)`` is a matching ``m`` together with a vertex
set ``c`` disjoint from the endpoints of ``m`` such that every edge has an
endpoint matched by ``m`` or in ``c``. Tables map ``(M, C)`` to the number
of pairs with ``M[a]`` matched and ``C[a]`` cover vertices of label ``a``.
Pairs with an empty cover are exactly the maximal matchings.
"""

from __future__ import annotations

from collections import defaultdict

from .core import Binomials, NodeResult, add_vectors, check_width, delta, fold_labels, table_convolve
from .expression import Expression, fold, max_label

MCNodeResult = NodeResult


def mc_singleton(i: int, l: int) -> NodeResult:
    zero = (0,) * l
    return NodeResult({(zero, zero): 1, (zero, delta(i, l)): 1}, delta(i, l))


def mc_rename(r: NodeResult, i: int, j: int) -> NodeResult:
    out: dict = defaultdict(int)
    for (m, c), w in r.table.items():
        out[fold_labels(m, i, j), fold_labels(c, i, j)] += w
    return NodeResult(dict(out), fold_labels(r.label_counts, i, j))


def mc_union(a: NodeResult, b: NodeResult) -> NodeResult:
    check_width(a, b)
    return NodeResult(table_convolve(a.table, b.table), add_vectors(a.label_counts, b.label_counts))


def mc_edge_create(
    r: NodeResult, i: int, j: int, binom: Binomials | None = None, *, coverage_filter: bool = True
) -> NodeResult:
    """Join labels ``i`` and ``j``; ``q`` cover vertices per side become ``q`` new matching edges.

    A source pair survives only if the new complete bipartite edge set is
    covered, i.e. one of the two classes has no vertex outside ``m`` and
    ``c``. ``coverage_filter=False`` drops that check and reproduces the
    bare recurrence; it exists for regression tests and yields wrong counts.
    """
    if binom is None:
        binom = Binomials(r.vertex_count)
    ni, nj = r.label_counts[i - 1], r.label_counts[j - 1]
    out: dict = defaultdict(int)
    for (m, c), w in r.table.items():
        mi, mj, ci, cj = m[i - 1], m[j - 1], c[i - 1], c[j - 1]
        if coverage_filter and ni - mi - ci and nj - mj - cj:
            continue
        for q in range(min(ci, cj) + 1):
            weight = binom.choose(ci, q) * binom.choose(cj, q) * binom.factorial(q)
            if q:
                mm, cc = list(m), list(c)
                mm[i - 1] += q
                mm[j - 1] += q
                cc[i - 1] -= q
                cc[j - 1] -= q
                key = (tuple(mm), tuple(cc))
            else:
                key = (m, c)
            out[key] += w * weight
    return NodeResult(dict(out), r.label_counts)


def run_mc(expr: Expression, width: int | None = None, *, coverage_filter: bool = True) -> NodeResult:
    l = width or max_label(expr)
    binom = Binomials()
    return fold(
        expr,
        lambda i: mc_singleton(i, l),
        mc_rename,
        mc_union,
        lambda r, i, j: mc_edge_create(r, i, j, binom, coverage_filter=coverage_filter),
    )


def maximal_by_size(root: NodeResult) -> dict[int, int]:
    sizes: dict[int, int] = defaultdict(int)
    for (m, c), w in root.table.items():
        if not any(c):
            sizes[sum(m) // 2] += w
    return dict(sorted(sizes.items()))


def count_maximal_matchings(expr: Expression, width: int | None = None) -> dict[int, int]:
    """Maximal matchings grouped by number of edges."""
    return maximal_by_size(run_mc(expr, width))


def perfect_from_root(root: NodeResult) -> int:
    n = root.vertex_count
    return sum(w for (m, c), w in root.table.items() if not any(c) and sum(m) == n)


def count_perfect_matchings(expr: Expression, width: int | None = None) -> int:
    return perfect_from_root(run_mc(expr, width))


def count_min_maximal_matchings(expr: Expression, width: int | None = None) -> tuple[int, int]:
    """``(size, count)`` of the smallest maximal matchings."""
    sizes = count_maximal_matchings(expr, width)
    size = min(sizes)
    return size, sizes[size]


# -- plain matchings, tables keyed by matched-vertices-per-label


def m_singleton(i: int, l: int) -> NodeResult:
    return NodeResult({(0,) * l: 1}, delta(i, l))


def m_rename(r: NodeResult, i: int, j: int) -> NodeResult:
    out: dict = defaultdict(int)
    for m, w in r.table.items():
        out[fold_labels(m, i, j)] += w
    return NodeResult(dict(out), fold_labels(r.label_counts, i, j))


def m_union(a: NodeResult, b: NodeResult) -> NodeResult:
    check_width(a, b)
    return NodeResult(table_convolve(a.table, b.table), add_vectors(a.label_counts, b.label_counts))


def m_edge_create(r: NodeResult, i: int, j: int, binom: Binomials | None = None) -> NodeResult:
    if binom is None:
        binom = Binomials(r.vertex_count)
    ni, nj = r.label_counts[i - 1], r.label_counts[j - 1]
    out: dict = defaultdict(int)
    for m, w in r.table.items():
        fi, fj = ni - m[i - 1], nj - m[j - 1]
        for q in range(min(fi, fj) + 1):
            key = list(m)
            key[i - 1] += q
            key[j - 1] += q
            out[tuple(key)] += w * binom.choose(fi, q) * binom.choose(fj, q) * binom.factorial(q)
    return NodeResult(dict(out), r.label_counts)


def run_matchings(expr: Expression, width: int | None = None) -> NodeResult:
    l = width or max_label(expr)
    binom = Binomials()
    return fold(
        expr,
        lambda i: m_singleton(i, l),
        m_rename,
        m_union,
        lambda r, i, j: m_edge_create(r, i, j, binom),
    )


def count_matchings(expr: Expression, width: int | None = None) -> dict[int, int]:
    """All matchings (the empty one included) grouped by number of edges."""
    sizes: dict[int, int] = defaultdict(int)
    for m, w in run_matchings(expr, width).table.items():
        sizes[sum(m) // 2] += w
    return dict(sorted(sizes.items()))
