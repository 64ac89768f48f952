import math

import pytest
from hypothesis import given, settings, strategies as st

from cwcount.core import (
    Binomials, delta, pair_delta, pair_index, table_convolve, table_lookup, table_mass,
)
from cwcount.matchings import mc_singleton


def test_delta():
    assert delta(1, 3) == (1, 0, 0)
    assert delta(3, 3) == (0, 0, 1)
    assert delta(2, 2) == (0, 1)
    with pytest.raises(ValueError):
        delta(0, 2)
    with pytest.raises(ValueError):
        delta(3, 2)


def test_pair_delta():
    idx = pair_index(2)
    assert idx.as_dict(pair_delta(0, 1, 2)) == {(0, 1): 1}
    assert sum(pair_delta(0, 1, 2)) == 1
    assert pair_index(1).as_dict(pair_delta(1, 1, 1)) == {(1, 1): 1}
    for bad in [(0, 0), (2, 1), (0, 3)]:
        with pytest.raises(ValueError):
            pair_delta(*bad, 2)


@pytest.mark.parametrize("l", [1, 2, 3, 5])
def test_pair_index_layout(l):
    idx = pair_index(l)
    assert idx.size == l * (l + 3) // 2
    for a in range(l + 1):
        for b in range(l + 1):
            if (a, b) != (0, 0):
                assert idx.index(a, b) == idx.index(b, a)
    vec = idx.from_dict({(2 if l >= 2 else 1, 1): 3, (0, 1): 1})
    assert idx.get(vec, 1, 0) == 1


def test_lookup_out_of_range_is_zero():
    table = {(1, 2): 5}
    assert table_lookup(table, (1, 2), 4) == 5
    assert table_lookup(table, (1, -1), 4) == 0
    assert table_lookup(table, (5, 0), 4) == 0
    assert table == {(1, 2): 5}
    mc = {((0, 1), (1, 0)): 2}
    assert table_lookup(mc, ((0, 1), (1, 0)), 3) == 2
    assert table_lookup(mc, ((0, -1), (1, 0)), 3) == 0


def test_convolve_examples():
    t = {(2, 1): 4, (0, 3): 7}
    assert table_convolve({(0, 0): 1}, t) == t
    assert table_convolve({(1,): 2}, {(1,): 3}) == {(2,): 6}
    s1 = mc_singleton(1, 1).table
    assert table_convolve(s1, s1) == {((0,), (0,)): 1, ((0,), (1,)): 2, ((0,), (2,)): 1}


def test_convolve_width_mismatch():
    with pytest.raises(ValueError):
        table_convolve({(1, 0): 1}, {(1,): 1})


tables = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(1, 10**20), min_size=1, max_size=6
)


@settings(max_examples=80)
@given(tables, tables, tables)
def test_convolve_algebra(a, b, c):
    assert table_convolve(a, b) == table_convolve(b, a)
    assert table_convolve(table_convolve(a, b), c) == table_convolve(a, table_convolve(b, c))
    assert table_mass(table_convolve(a, b)) == table_mass(a) * table_mass(b)


def test_binomials_match_math():
    b = Binomials(12)
    for n in range(30):
        for k in range(-1, n + 2):
            assert b.choose(n, k) == (math.comb(n, k) if 0 <= k <= n else 0)
        assert b.factorial(n) == math.factorial(n)
