"""Baumslag-Solitar groups acting on R x T(|m|, n) and on its visual boundary."""

__version__ = "0.1.0"

from .core import GroupParams, NormalForm, ball, invert, multiply, parse_word, reduce  # noqa: E402
from .tree import TreeEnd, TreeVertex, act_end, act_vertex, tree_distance  # noqa: E402

__all__ = [
    "__version__",
    "GroupParams",
    "NormalForm",
    "ball",
    "invert",
    "multiply",
    "parse_word",
    "reduce",
    "TreeEnd",
    "TreeVertex",
    "act_end",
    "act_vertex",
    "tree_distance",
]
