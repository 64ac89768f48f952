"""l-expressions: AST, the ``.cwe`` text format, evaluation and irredundancy checks.

An expression builds a labeled graph from singletons with three operators::

    (v i)          one vertex labeled i
    (ren i j E)    relabel every i-vertex of E to j
    (u E F)        disjoint union
    (e i j E)      join every i-vertex of E to every j-vertex of E

Vertex ids are assigned left to right over the leaves, so ``evaluate`` is
deterministic and vertex ``k`` is always the ``k``-th ``(v _)`` in the text.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Callable, Iterator, TypeVar, Union as TUnion

__all__ = [
    "Singleton", "Rename", "Union", "EdgeCreate", "Expression",
    "LabeledGraph", "Violation", "ExpressionSyntaxError", "PartialRedundancy",
    "parse_expression", "parse_document", "serialize_expression", "format_document",
    "evaluate", "fold", "max_label", "leaf_count", "iter_nodes",
    "validate_irredundant", "drop_null_edge_ops", "gen_family", "FAMILIES",
]


@dataclass(frozen=True)
class Singleton:
    label: int


@dataclass(frozen=True)
class Rename:
    src: int
    dst: int
    child: "Expression"


@dataclass(frozen=True)
class Union:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class EdgeCreate:
    a: int
    b: int
    child: "Expression"


Expression = TUnion[Singleton, Rename, Union, EdgeCreate]


class ExpressionSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class PartialRedundancy(ValueError):
    """An edge creation that adds some, but not all, of its cross pairs."""

    def __init__(self, path: tuple[int, ...], node: EdgeCreate, existing: int, total: int):
        super().__init__(
            f"(e {node.a} {node.b} ...) at node path {list(path)} adds "
            f"{total - existing} of {total} cross pairs; {existing} already exist"
        )
        self.path = path
        self.node = node
        self.existing = existing
        self.total = total


# --------------------------------------------------------------------------
# traversal


T = TypeVar("T")


def fold(
    expr: Expression,
    singleton: Callable[[int], T],
    rename: Callable[[T, int, int], T],
    union: Callable[[T, T], T],
    edge: Callable[[T, int, int], T],
) -> T:
    """Bottom-up fold over the expression tree without recursion.

    Children are always fully processed before their parent; siblings are
    processed left before right.
    """
    stack: list[tuple[Expression, bool]] = [(expr, False)]
    values: list[T] = []
    while stack:
        node, ready = stack.pop()
        if isinstance(node, Singleton):
            values.append(singleton(node.label))
        elif not ready:
            stack.append((node, True))
            if isinstance(node, Union):
                stack.append((node.right, False))
                stack.append((node.left, False))
            else:
                stack.append((node.child, False))
        elif isinstance(node, Union):
            right = values.pop()
            left = values.pop()
            values.append(union(left, right))
        elif isinstance(node, Rename):
            values.append(rename(values.pop(), node.src, node.dst))
        else:
            values.append(edge(values.pop(), node.a, node.b))
    return values[0]


def iter_nodes(expr: Expression) -> Iterator[tuple[tuple[int, ...], Expression]]:
    """Pre-order walk yielding ``(path, node)``; a path lists child indices from the root."""
    stack: list[tuple[tuple[int, ...], Expression]] = [((), expr)]
    while stack:
        path, node = stack.pop()
        yield path, node
        if isinstance(node, Union):
            stack.append((path + (1,), node.right))
            stack.append((path + (0,), node.left))
        elif isinstance(node, (Rename, EdgeCreate)):
            stack.append((path + (0,), node.child))


def max_label(expr: Expression) -> int:
    top = 0
    for _, node in iter_nodes(expr):
        if isinstance(node, Singleton):
            top = max(top, node.label)
        elif isinstance(node, Rename):
            top = max(top, node.src, node.dst)
        elif isinstance(node, EdgeCreate):
            top = max(top, node.a, node.b)
    return top


def leaf_count(expr: Expression) -> int:
    return sum(1 for _, node in iter_nodes(expr) if isinstance(node, Singleton))


# --------------------------------------------------------------------------
# text format

_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|-?\d+|[A-Za-z_]+|.")
_WIDTH_HEADER = re.compile(r"\A[ \t]*;[ \t]*width[ \t]+(\d+)[ \t]*(?:\n|\Z)")
_ARITY = {"v": (1, 0), "ren": (2, 1), "u": (0, 2), "e": (2, 1)}


def _tokenize(text: str) -> list[tuple[str, int, int]]:
    tokens = []
    line, line_start = 1, 0
    for m in _TOKEN.finditer(text):
        tok = m.group()
        if not tok.isspace() and not tok.startswith(";"):
            tokens.append((tok, line, m.start() - line_start + 1))
        newlines = tok.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + tok.rindex("\n") + 1
    return tokens


def parse_document(text: str) -> tuple[Expression, int]:
    """Parse a ``.cwe`` document and return ``(expression, width)``.

    The width is the largest label used unless a leading ``;width N``
    header declares it; a declared width smaller than a used label is an error.
    """
    expr = parse_expression(text)
    width = max_label(expr)
    header = _WIDTH_HEADER.match(text)
    if header:
        declared = int(header.group(1))
        if declared < width:
            raise ExpressionSyntaxError(
                f"declared width {declared} is smaller than label {width}", 1, 1
            )
        width = declared
    return expr, width


def parse_expression(text: str) -> Expression:
    tokens = _tokenize(text)
    if not tokens:
        raise ExpressionSyntaxError("empty input", 1, 1)
    pos = 0

    def expect(what: str) -> tuple[str, int, int]:
        nonlocal pos
        if pos >= len(tokens):
            last = tokens[-1]
            raise ExpressionSyntaxError(f"unexpected end of input, expected {what}", last[1], last[2])
        tok = tokens[pos]
        pos += 1
        return tok

    def label() -> int:
        tok, line, col = expect("a label")
        if not re.fullmatch(r"-?\d+", tok):
            raise ExpressionSyntaxError(f"expected a label, got {tok!r}", line, col)
        value = int(tok)
        if value < 1:
            raise ExpressionSyntaxError(f"labels start at 1, got {value}", line, col)
        return value

    # explicit stack: deep left-leaning terms would overflow the recursion limit
    frames: list[list] = []
    result: Expression | None = None
    while True:
        tok, line, col = expect("'('")
        if tok != "(":
            raise ExpressionSyntaxError(f"expected '(', got {tok!r}", line, col)
        op, line, col = expect("an operator")
        if op not in _ARITY:
            raise ExpressionSyntaxError(f"unknown operator {op!r}", line, col)
        n_labels, n_children = _ARITY[op]
        labels = [label() for _ in range(n_labels)]
        if n_labels == 2 and labels[0] == labels[1]:
            raise ExpressionSyntaxError(f"({op} {labels[0]} {labels[1]} ...) needs two distinct labels", line, col)
        frames.append([op, labels, n_children, [], line, col])
        while frames and len(frames[-1][3]) == frames[-1][2]:
            op, labels, _, children, line, col = frames.pop()
            tok, tline, tcol = expect("')'")
            if tok != ")":
                raise ExpressionSyntaxError(f"expected ')' to close ({op} ...), got {tok!r}", tline, tcol)
            if op == "v":
                node: Expression = Singleton(labels[0])
            elif op == "ren":
                node = Rename(labels[0], labels[1], children[0])
            elif op == "u":
                node = Union(children[0], children[1])
            else:
                node = EdgeCreate(labels[0], labels[1], children[0])
            if frames:
                frames[-1][3].append(node)
            else:
                result = node
        if result is not None:
            break
    if pos != len(tokens):
        tok, line, col = tokens[pos]
        raise ExpressionSyntaxError(f"trailing input {tok!r}", line, col)
    return result


def serialize_expression(expr: Expression) -> str:
    return fold(
        expr,
        lambda i: f"(v {i})",
        lambda s, i, j: f"(ren {i} {j} {s})",
        lambda a, b: f"(u {a} {b})",
        lambda s, i, j: f"(e {i} {j} {s})",
    )


def format_document(expr: Expression, width: int | None = None) -> str:
    """Serialize with a ``;width`` header, as written by ``cwcount gen``."""
    if width is None:
        width = max_label(expr)
    return f";width {width}\n{serialize_expression(expr)}\n"


# --------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class LabeledGraph:
    """Concrete graph of an expression: ``labels[v]`` is the label of vertex ``v``."""

    labels: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    width: int = 0

    def __post_init__(self):
        if self.width == 0:
            object.__setattr__(self, "width", max(self.labels, default=0))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def label_counts(self) -> tuple[int, ...]:
        counts = [0] * self.width
        for lab in self.labels:
            counts[lab - 1] += 1
        return tuple(counts)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in self.labels]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def vertices_with_label(self, label: int) -> list[int]:
        return [v for v, lab in enumerate(self.labels) if lab == label]

    def to_dot(self) -> str:
        lines = ["graph G {"]
        lines += [f'  {v} [label="{v}:{lab}"];' for v, lab in enumerate(self.labels)]
        lines += [f"  {u} -- {v};" for u, v in self.sorted_edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"


def evaluate(expr: Expression, width: int | None = None) -> LabeledGraph:
    # (labels, edges, offset) while folding; ids are shifted at unions
    def union(a, b):
        la, ea = a
        lb, eb = b
        k = len(la)
        return la + lb, ea + [(u + k, v + k) for u, v in eb]

    def rename(s, i, j):
        labs, edges = s
        return [j if lab == i else lab for lab in labs], edges

    def edge(s, i, j):
        labs, edges = s
        left = [v for v, lab in enumerate(labs) if lab == i]
        right = [v for v, lab in enumerate(labs) if lab == j]
        return labs, edges + [(min(u, v), max(u, v)) for u in left for v in right]

    labs, edges = fold(expr, lambda i: ([i], []), rename, union, edge)
    return LabeledGraph(tuple(labs), frozenset(edges), width or max_label(expr))


# --------------------------------------------------------------------------
# irredundancy


@dataclass(frozen=True)
class Violation:
    """An edge creation applied where ``existing`` cross pairs were already adjacent."""

    path: tuple[int, ...]
    node: EdgeCreate = field(repr=False)
    existing: int
    total: int

    @property
    def partial(self) -> bool:
        return self.existing < self.total


class _ClassSummary:
    """Per-label vertex counts and per-label-pair edge counts of a node's graph."""

    __slots__ = ("counts", "cross")

    def __init__(self, counts: dict[int, int], cross: dict[tuple[int, int], int]):
        self.counts = counts
        self.cross = cross

    @classmethod
    def singleton(cls, i: int) -> "_ClassSummary":
        return cls({i: 1}, {})

    def union(self, other: "_ClassSummary") -> "_ClassSummary":
        counts = dict(self.counts)
        for k, v in other.counts.items():
            counts[k] = counts.get(k, 0) + v
        cross = dict(self.cross)
        for k, v in other.cross.items():
            cross[k] = cross.get(k, 0) + v
        return _ClassSummary(counts, cross)

    def rename(self, i: int, j: int) -> "_ClassSummary":
        counts = dict(self.counts)
        moved = counts.pop(i, 0)
        if moved:
            counts[j] = counts.get(j, 0) + moved
        cross: dict[tuple[int, int], int] = {}
        for (a, b), v in self.cross.items():
            a, b = (j if a == i else a), (j if b == i else b)
            key = (min(a, b), max(a, b))
            cross[key] = cross.get(key, 0) + v
        return _ClassSummary(counts, cross)

    def existing(self, i: int, j: int) -> tuple[int, int]:
        total = self.counts.get(i, 0) * self.counts.get(j, 0)
        return self.cross.get((min(i, j), max(i, j)), 0), total

    def edge(self, i: int, j: int) -> "_ClassSummary":
        _, total = self.existing(i, j)
        cross = dict(self.cross)
        if total:
            cross[(min(i, j), max(i, j))] = total
        return _ClassSummary(self.counts, cross)


def _walk_summaries(expr: Expression, on_edge: Callable) -> "_ClassSummary":
    # post-order over (path, node), calling on_edge(path, node, child_summary)
    stack: list[tuple[tuple[int, ...], Expression, bool]] = [((), expr, False)]
    values: list[_ClassSummary] = []
    while stack:
        path, node, ready = stack.pop()
        if isinstance(node, Singleton):
            values.append(_ClassSummary.singleton(node.label))
        elif not ready:
            stack.append((path, node, True))
            if isinstance(node, Union):
                stack.append((path + (1,), node.right, False))
                stack.append((path + (0,), node.left, False))
            else:
                stack.append((path + (0,), node.child, False))
        elif isinstance(node, Union):
            right = values.pop()
            values.append(values.pop().union(right))
        elif isinstance(node, Rename):
            values.append(values.pop().rename(node.src, node.dst))
        else:
            child = values.pop()
            on_edge(path, node, child)
            values.append(child.edge(node.a, node.b))
    return values[0]


def validate_irredundant(expr: Expression) -> list[Violation]:
    """Every edge creation whose child graph already has an edge between its two classes."""
    found: list[Violation] = []

    def check(path, node, child):
        existing, total = child.existing(node.a, node.b)
        if existing:
            found.append(Violation(path, node, existing, total))

    _walk_summaries(expr, check)
    found.sort(key=lambda v: v.path)
    return found


def drop_null_edge_ops(expr: Expression) -> Expression:
    """Remove edge creations that add no new edge; reject partially redundant ones.

    Only violating nodes are dropped, so an irredundant input comes back
    unchanged (an edge creation on an empty class is kept).
    """
    violations = validate_irredundant(expr)
    for v in violations:
        if v.partial:
            raise PartialRedundancy(v.path, v.node, v.existing, v.total)
    if not violations:
        return expr
    drop = {v.path for v in violations}

    stack: list[tuple[tuple[int, ...], Expression, bool]] = [((), expr, False)]
    values: list[Expression] = []
    while stack:
        path, node, ready = stack.pop()
        if isinstance(node, Singleton):
            values.append(node)
        elif not ready:
            stack.append((path, node, True))
            if isinstance(node, Union):
                stack.append((path + (1,), node.right, False))
                stack.append((path + (0,), node.left, False))
            else:
                stack.append((path + (0,), node.child, False))
        elif isinstance(node, Union):
            right = values.pop()
            values.append(Union(values.pop(), right))
        elif isinstance(node, Rename):
            values.append(Rename(node.src, node.dst, values.pop()))
        elif path in drop:
            pass  # the child is already on the value stack
        else:
            values.append(EdgeCreate(node.a, node.b, values.pop()))
    return values[0]


# --------------------------------------------------------------------------
# generators


def _path(n: int) -> Expression:
    # invariant: the current end vertex is labeled 2, every other vertex 3
    expr: Expression = Singleton(2)
    for _ in range(n - 1):
        joined = EdgeCreate(1, 2, Union(expr, Singleton(1)))
        expr = Rename(1, 2, Rename(2, 3, joined))
    return expr


def _clique(n: int) -> Expression:
    expr: Expression = Singleton(1)
    for _ in range(n - 1):
        expr = Rename(2, 1, EdgeCreate(1, 2, Union(expr, Singleton(2))))
    return expr


def _balanced_union(parts: list[Expression]) -> Expression:
    while len(parts) > 1:
        parts = [Union(parts[k], parts[k + 1]) if k + 1 < len(parts) else parts[k]
                 for k in range(0, len(parts), 2)]
    return parts[0]


def _complete_bipartite(a: int, b: int) -> Expression:
    left = _balanced_union([Singleton(1) for _ in range(a)])
    right = _balanced_union([Singleton(2) for _ in range(b)])
    return EdgeCreate(1, 2, Union(left, right))


def _cograph(n: int, rng: random.Random) -> Expression:
    # random cotree; every finished subterm has all vertices on label 1
    if n == 1:
        return Singleton(1)
    k = rng.randint(1, n - 1)
    left, right = _cograph(k, rng), _cograph(n - k, rng)
    if rng.random() < 0.5:
        return Union(left, right)
    return Rename(2, 1, EdgeCreate(1, 2, Union(left, Rename(1, 2, right))))


def _random(n: int, l: int, rng: random.Random) -> tuple[Expression, _ClassSummary]:
    # random split tree; after each union, a few random joins and relabelings
    if n == 1:
        lab = rng.randint(1, l)
        return Singleton(lab), _ClassSummary.singleton(lab)
    k = rng.randint(1, n - 1)
    left, ls = _random(k, l, rng)
    right, rs = _random(n - k, l, rng)
    expr: Expression = Union(left, right)
    summary = ls.union(rs)
    if l < 2:
        return expr, summary
    for _ in range(rng.randint(1, 3)):
        i, j = rng.sample(range(1, l + 1), 2)
        if rng.random() < 0.8:
            existing, total = summary.existing(i, j)
            if total and not existing:
                expr, summary = EdgeCreate(i, j, expr), summary.edge(i, j)
        elif summary.counts.get(i):
            expr, summary = Rename(i, j, expr), summary.rename(i, j)
    return expr, summary


FAMILIES = {
    "path": 1,
    "clique": 1,
    "complete-bipartite": 2,
    "cograph": 1,
    "random": 2,
}


def gen_family(family: str, *params: int, seed: int = 0) -> Expression:
    """Irredundant expression for a named graph family.

    ``path(n)`` uses labels 1..3, ``clique(n)``, ``complete-bipartite(a, b)``
    and ``cograph(n)`` use 1..2, ``random(n, l)`` uses 1..l. The seeded
    families draw from ``random.Random(seed)`` (Mersenne Twister), so the
    output is reproducible across runs and platforms.
    """
    family = family.replace("_", "-")
    if family == "cograph-random":
        family = "cograph"
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}")
    if len(params) != FAMILIES[family]:
        raise ValueError(f"{family} takes {FAMILIES[family]} size parameter(s), got {len(params)}")
    if any(p < 1 for p in params):
        raise ValueError(f"{family} sizes must be >= 1, got {params}")
    if family == "path":
        return _path(params[0])
    if family == "clique":
        return _clique(params[0])
    if family == "complete-bipartite":
        return _complete_bipartite(*params)
    if family == "cograph":
        return _cograph(params[0], random.Random(seed))
    return _random(params[0], params[1], random.Random(seed))[0]
