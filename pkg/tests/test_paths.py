import math
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from cwcount import oracle as O
from cwcount.core import pair_index
from cwcount.expression import EdgeCreate, evaluate, gen_family, iter_nodes, parse_expression
from cwcount.paths import (
    ExtensionWalk, count_path_matchings, count_paths, derive_N, extension_classes,
    pm_edge_create, pm_rename, pm_singleton, pm_union, run_pm, t_value,
)

K2 = parse_expression("(e 1 2 (u (v 1) (v 2)))")


def vec(l, **entries):
    # vec(2, p01=1, p12=1) -> pair vector with k_{0,1} = 1 and k_{1,2} = 1
    return pair_index(l).from_dict({(int(k[1]), int(k[2])): v for k, v in entries.items()})


def test_singleton():
    assert pm_singleton(1, 1).table == {vec(1, p01=1): 1}
    assert pm_singleton(3, 3).table == {vec(3, p03=1): 1}
    assert pm_singleton(2, 3).mass == 1


def test_rename():
    assert pm_rename(pm_singleton(2, 2), 2, 1).table == {vec(2, p01=1): 1}


def test_rename_folds_path_classes():
    l = 3
    r = pm_singleton(1, l)
    r = type(r)({vec(l, p12=2, p22=1, p11=3, p23=4, p02=5, p33=1): 7}, (1, 1, 1))
    out = pm_rename(r, 2, 1)
    assert out.table == {vec(l, p11=6, p13=4, p01=5, p33=1): 7}
    assert out.mass == r.mass


def test_rename_p3_to_monochrome():
    expr = gen_family("path", 3)
    root = run_pm(expr, 3)
    root = pm_rename(pm_rename(root, 2, 1), 3, 1)
    idx = pair_index(3)
    got = {(K[idx.index(0, 1)], K[idx.index(1, 1)]): w for K, w in root.table.items()}
    expected = Counter()
    for K, w in O.enumerate_pm(evaluate(expr, 3)).items():
        expected[sum(K[s] for s in idx.uncovered), sum(K[s] for s in idx.path_slots)] += w
    assert got == dict(expected) == {(3, 0): 1, (1, 1): 2, (0, 1): 1}


def test_union():
    u = pm_union(pm_singleton(1, 2), pm_singleton(2, 2))
    assert u.table == {vec(2, p01=1, p02=1): 1}
    p2 = run_pm(K2, 2)
    assert pm_union(p2, p2).table == O.enumerate_pm(evaluate(parse_expression(
        "(u (e 1 2 (u (v 1) (v 2))) (e 1 2 (u (v 1) (v 2))))")))
    assert pm_union(p2, p2).mass == p2.mass ** 2


def test_t_value_base():
    walk = ExtensionWalk(1, 2, 2)
    zero = (0, 0, 0)
    a, b = vec(2, p01=1), vec(2, p12=1)
    assert t_value(walk, a, a, zero) == 1
    assert t_value(walk, a, b, zero) == 0


def test_derive_n_single_potential_edge():
    src = vec(2, p01=1, p02=1)
    assert derive_N(1, 2, src, src, 2) == 1
    assert derive_N(1, 2, src, vec(2, p12=1), 2) == 1
    assert derive_N(2, 1, src, vec(2, p12=1), 2) == 1


def test_derive_n_two_edge_star():
    src = vec(2, p01=2, p02=1)
    assert derive_N(1, 2, src, vec(2, p01=1, p12=1), 2) == 2
    assert derive_N(1, 2, src, vec(2, p11=1), 2) == 1
    assert derive_N(1, 2, src, src, 2) == 1


def test_derive_n_without_label_i():
    src = vec(3, p02=2, p23=1)
    assert derive_N(1, 2, src, src, 3) == 1
    assert derive_N(1, 2, src, vec(3, p02=1, p23=1, p22=0), 3) == 0


def test_odd_ii_count_rejected():
    walk = ExtensionWalk(1, 2, 2)
    with pytest.raises(AssertionError):
        walk.steps(vec(2, p11=1, p02=1), (0, 1, 0))


def test_edge_create_k2():
    s = pm_union(pm_singleton(1, 2), pm_singleton(2, 2))
    out = pm_edge_create(s, 1, 2)
    assert out.table == {vec(2, p01=1, p02=1): 1, vec(2, p12=1): 1}
    assert out.mass >= s.mass


def test_edge_create_path4_root():
    expr = gen_family("path", 4)
    assert run_pm(expr, 3).table == O.enumerate_pm(evaluate(expr, 3))


def test_run_pm_examples():
    assert run_pm(parse_expression("(v 1)")).table == {vec(1, p01=1): 1}
    assert run_pm(gen_family("clique", 3)).mass == 7
    p4 = gen_family("path", 4)
    assert run_pm(p4).mass == sum(O.enumerate_pm(evaluate(p4)).values()) == 8


def test_count_paths_examples():
    assert count_paths(K2) == 1
    assert count_paths(gen_family("path", 3)) == 3
    assert count_paths(gen_family("clique", 3)) == 6


def test_count_path_matchings_examples():
    assert count_path_matchings(parse_expression("(v 1)")) == (1, 0)
    assert count_path_matchings(gen_family("clique", 3)) == (7, 6)
    p4 = gen_family("path", 4)
    assert count_path_matchings(p4).total == sum(O.enumerate_pm(evaluate(p4)).values())


@pytest.mark.parametrize("n", range(2, 8))
def test_clique_paths_closed_form(n):
    expected = sum(math.factorial(n) // (2 * math.factorial(n - k)) for k in range(2, n + 1))
    assert count_paths(gen_family("clique", n)) == expected == O.enumerate_paths(evaluate(gen_family("clique", n)))


def test_linear_forests_of_cliques():
    # number of linear forests of K_n (OEIS A011800)
    expected = [1, 1, 2, 7, 34, 206, 1486, 12412, 117692, 1248004, 14625856]
    assert [count_path_matchings(gen_family("clique", n)).total for n in range(1, 11)] == expected[1:]


def _edge_nodes(corpus, max_n):
    for n, l, seed, expr, _ in corpus:
        for _, node in iter_nodes(expr):
            if isinstance(node, EdgeCreate):
                child = evaluate(node.child, l)
                if child.n <= max_n:
                    yield l, node, child


def test_forward_walk_agrees_with_t_value(corpus):
    # the scatter used by pm_edge_create against per-target memoised T values
    checked = 0
    for l, node, child in _edge_nodes(corpus, 6):
        i, j = sorted((node.a, node.b))
        walk = ExtensionWalk(i, j, l)
        for source in O.enumerate_pm(child):
            forward = extension_classes(walk, {source: 1})
            for target, count in forward.items():
                assert t_value(walk, target, source, walk.start(source)) == count
            checked += 1
    assert checked > 100


def test_node_invariants(corpus):
    from cwcount.expression import fold
    for n, l, seed, expr, _ in corpus[:150]:
        idx = pair_index(l)
        visited = []
        walks = []

        def edge(r, i, j):
            a, b = sorted((i, j))
            walk = ExtensionWalk(a, b, l)
            original = walk.steps

            def steps(K, X):
                assert X[a] % 2 == 0
                return original(K, X)

            walk.steps = steps
            out = extension_classes(walk, r.table)
            walks.append(walk)
            res = type(r)({K: w for K, w in out.items() if w}, r.label_counts)
            visited.append(res)
            return res

        def keep(res):
            visited.append(res)
            return res

        fold(expr, lambda i: keep(pm_singleton(i, l)),
             lambda r, i, j: keep(pm_rename(r, i, j)),
             lambda a, b: keep(pm_union(a, b)), edge)
        for res in visited:
            for K, w in res.table.items():
                assert w > 0 and min(K) >= 0
                assert sum(K[s] for s in idx.uncovered) + 2 * sum(K[s] for s in idx.path_slots) <= res.vertex_count


def test_every_node_matches_oracle(corpus):
    for n, l, seed, expr, _ in corpus[:100]:
        for _, node in iter_nodes(expr):
            assert run_pm(node, l).table == O.enumerate_pm(evaluate(node, l))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 8), st.integers(1, 4), st.integers(0, 2**32))
def test_random_expressions_match_oracle(n, l, seed):
    expr = gen_family("random", n, l, seed=seed)
    g = evaluate(expr, l)
    root = run_pm(expr, l)
    assert root.table == O.enumerate_pm(g)
    assert count_paths(expr, l) == O.enumerate_paths(g)
