"""Shared counting machinery: unit vectors, pair indexing, sparse tables, binomials.

Tables are plain ``dict`` objects mapping integer-tuple keys to Python ints.
An absent key means a count of zero. Keys for matching-cover tables are
``(M, C)`` pairs of label vectors; keys for matching tables are label
vectors; keys for path-matching tables are pair vectors laid out by
:class:`PairIndex`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Hashable

Table = Dict[Hashable, int]


def delta(r: int, l: int) -> tuple[int, ...]:
    """Unit label vector with a 1 at label ``r`` (1-based)."""
    if not 1 <= r <= l:
        raise ValueError(f"label {r} outside 1..{l}")
    return tuple(1 if k == r else 0 for k in range(1, l + 1))


class PairIndex:
    """Layout of pair vectors ``(k_{a,b})`` for ``0 <= a <= b <= l``, ``(a, b) != (0, 0)``.

    Only the upper triangle is stored; ``index(a, b)`` accepts either order.
    Pairs ``(0, b)`` count uncovered vertices of label ``b``; pairs ``(a, b)``
    with ``a >= 1`` count paths with one extremity in each class.
    """

    def __init__(self, l: int):
        if l < 1:
            raise ValueError("width must be >= 1")
        self.l = l
        self.pairs: list[tuple[int, int]] = [
            (a, b) for a in range(l + 1) for b in range(a, l + 1) if (a, b) != (0, 0)
        ]
        self._pos = {p: k for k, p in enumerate(self.pairs)}
        self.size = len(self.pairs)
        self.uncovered = [self._pos[(0, b)] for b in range(1, l + 1)]
        self.path_slots = [k for k, (a, _) in enumerate(self.pairs) if a >= 1]

    def index(self, a: int, b: int) -> int:
        if a > b:
            a, b = b, a
        try:
            return self._pos[(a, b)]
        except KeyError:
            raise ValueError(f"no pair slot ({a}, {b}) for width {self.l}") from None

    def get(self, vec: tuple[int, ...], a: int, b: int) -> int:
        return vec[self.index(a, b)]

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.size

    def as_dict(self, vec: tuple[int, ...]) -> dict[tuple[int, int], int]:
        return {p: v for p, v in zip(self.pairs, vec) if v}

    def from_dict(self, entries: dict[tuple[int, int], int]) -> tuple[int, ...]:
        vec = [0] * self.size
        for (a, b), v in entries.items():
            vec[self.index(a, b)] += v
        return tuple(vec)


@lru_cache(maxsize=None)
def pair_index(l: int) -> PairIndex:
    return PairIndex(l)


def pair_delta(r: int, s: int, l: int) -> tuple[int, ...]:
    """Unit pair vector with a 1 at ``(r, s)``."""
    if not (0 <= r <= s <= l) or (r, s) == (0, 0):
        raise ValueError(f"invalid pair ({r}, {s}) for width {l}")
    idx = pair_index(l)
    vec = [0] * idx.size
    vec[idx.index(r, s)] = 1
    return tuple(vec)


def table_lookup(table: Table, key, n: int) -> int:
    """Count stored at ``key``; zero for absent keys and for any component outside ``0..n``."""
    flat = key if not key or isinstance(key[0], int) else tuple(x for part in key for x in part)
    if any(x < 0 or x > n for x in flat):
        return 0
    return table.get(key, 0)


def _shape(key) -> tuple[int, ...]:
    if key and not isinstance(key[0], int):
        return tuple(len(part) for part in key)
    return (len(key),)


def _adder(key):
    if key and not isinstance(key[0], int):
        return lambda x, y: tuple(tuple(p + q for p, q in zip(u, v)) for u, v in zip(x, y))
    return lambda x, y: tuple(p + q for p, q in zip(x, y))


def table_convolve(t1: Table, t2: Table) -> Table:
    """Sparse Cauchy product: ``out[k] = sum(t1[k1] * t2[k2] for k1 + k2 == k)``."""
    if not t1 or not t2:
        return {}
    k1 = next(iter(t1))
    k2 = next(iter(t2))
    if _shape(k1) != _shape(k2):
        raise ValueError(f"key shape mismatch: {_shape(k1)} vs {_shape(k2)}")
    add = _adder(k1)
    out: Table = {}
    for a, wa in t1.items():
        for b, wb in t2.items():
            key = add(a, b)
            out[key] = out.get(key, 0) + wa * wb
    return out


def table_mass(table: Table) -> int:
    return sum(table.values())


class Binomials:
    """Pascal rows and factorials up to ``n``, grown on demand."""

    def __init__(self, n: int = 0):
        self.rows: list[list[int]] = [[1]]
        self.fact: list[int] = [1]
        self.extend(n)

    def extend(self, n: int) -> None:
        while len(self.rows) <= n:
            prev = self.rows[-1]
            self.rows.append([1] + [prev[k] + prev[k + 1] for k in range(len(prev) - 1)] + [1])
            self.fact.append(self.fact[-1] * len(self.fact))

    def choose(self, n: int, k: int) -> int:
        if k < 0 or n < 0 or k > n:
            return 0
        if n >= len(self.rows):
            self.extend(n)
        return self.rows[n][k]

    def factorial(self, n: int) -> int:
        if n >= len(self.fact):
            self.extend(n)
        return self.fact[n]


@dataclass(frozen=True)
class NodeResult:
    """DP table at one expression node, with the node's per-label vertex counts."""

    table: Table
    label_counts: tuple[int, ...]

    @property
    def width(self) -> int:
        return len(self.label_counts)

    @property
    def vertex_count(self) -> int:
        return sum(self.label_counts)

    @property
    def mass(self) -> int:
        return sum(self.table.values())


def fold_labels(vec: tuple[int, ...], i: int, j: int) -> tuple[int, ...]:
    """Move component ``i`` onto ``j`` (both 1-based)."""
    out = list(vec)
    out[j - 1] += out[i - 1]
    out[i - 1] = 0
    return tuple(out)


def add_vectors(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a + b for a, b in zip(u, v))


def check_width(a: NodeResult, b: NodeResult) -> None:
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")
