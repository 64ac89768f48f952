"""Counting matchings, maximal matchings, linear forests and paths on graphs given by l-expressions."""

from .expression import (
    EdgeCreate,
    LabeledGraph,
    Rename,
    Singleton,
    Union,
    drop_null_edge_ops,
    evaluate,
    gen_family,
    parse_document,
    parse_expression,
    serialize_expression,
    validate_irredundant,
)
from .matchings import (
    count_matchings,
    count_maximal_matchings,
    count_min_maximal_matchings,
    count_perfect_matchings,
    run_mc,
)
from .paths import count_path_matchings, count_paths, derive_N, run_pm

__version__ = "0.1.0"
