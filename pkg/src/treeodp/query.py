"""Competency questions over materialized tree interpretations.

Each question is answered by evaluating a class description; the ``oracle_*``
functions answer the same questions by walking parent pointers instead and
share no code with the class-expression evaluator.

The MRCA and exclusive-ancestor descriptions return the empty set when one
node is an ancestor-or-self of the other. That is what the descriptions say,
and it is kept as is; the oracles follow the usual ancestor-or-self convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .core import (
    HAS_ANCESTOR, HAS_CHILD, HAS_DESCENDANT, HAS_PARENT, HAS_SIBLING, LEAF_NODE, ROOT_NODE,
    Interpretation, validate_structure,
)
from .errors import NotATree, NotMaterialized, UnknownNode
from .expressions import AtomicConcept, ClassExpression, Exists, Nominal, conj, disj, extension


@dataclass(frozen=True)
class QueryResult:
    nodes: tuple[str, ...]
    expression: ClassExpression

    def __iter__(self):
        return iter(self.nodes)

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, node):
        return node in self.nodes

    def as_set(self) -> frozenset[str]:
        return frozenset(self.nodes)


def _require(interp: Interpretation, *nodes: str) -> None:
    if not interp.materialized:
        raise NotMaterialized()
    for n in nodes:
        if n not in interp.domain:
            raise UnknownNode(n)


def evaluate(interp: Interpretation, expr: ClassExpression) -> QueryResult:
    """Extension of ``expr`` as a sorted node list."""
    _require(interp)
    return QueryResult(tuple(sorted(extension(interp, expr))), expr)


# -- class descriptions --------------------------------------------------------

# expressions are immutable; reusing them keeps their cached hashes warm
@lru_cache(maxsize=8192)
def ancestors_expr(x: str) -> ClassExpression:
    return Exists(HAS_DESCENDANT, Nominal(x))


@lru_cache(maxsize=8192)
def self_or_ancestors_expr(x: str) -> ClassExpression:
    """``{x} ⊔ ∃hasDescendant.{x}``"""
    return disj(Nominal(x), ancestors_expr(x))


def common_ancestors_expr(x: str, y: str) -> ClassExpression:
    return conj(ancestors_expr(x), ancestors_expr(y))


def exclusive_ancestor_expr(x: str, y: str) -> ClassExpression:
    return conj(self_or_ancestors_expr(x), Exists(HAS_SIBLING, self_or_ancestors_expr(y)))


def mrca_expr(x: str, y: str) -> ClassExpression:
    return Exists(HAS_CHILD, exclusive_ancestor_expr(x, y))


# -- CQ1-CQ9 -------------------------------------------------------------------

def cq1_roots(interp: Interpretation) -> QueryResult:
    return evaluate(interp, AtomicConcept(ROOT_NODE))


def cq2_ancestors(interp: Interpretation, x: str) -> QueryResult:
    _require(interp, x)
    return evaluate(interp, ancestors_expr(x))


def cq3_leaves(interp: Interpretation) -> QueryResult:
    return evaluate(interp, AtomicConcept(LEAF_NODE))


def cq4_descendants(interp: Interpretation, x: str) -> QueryResult:
    _require(interp, x)
    return evaluate(interp, Exists(HAS_ANCESTOR, Nominal(x)))


def cq5_leaf_descendants(interp: Interpretation, x: str) -> QueryResult:
    _require(interp, x)
    return evaluate(interp, conj(Exists(HAS_ANCESTOR, Nominal(x)), AtomicConcept(LEAF_NODE)))


class DescendantAnswer(NamedTuple):
    related: bool
    ancestor: str | None = None
    descendant: str | None = None

    def __bool__(self):
        return self.related


def cq6_is_descendant(interp: Interpretation, x: str, y: str) -> DescendantAnswer:
    """Whether one of ``x``, ``y`` descends from the other, and in which direction."""
    _require(interp, x, y)
    if x in extension(interp, ancestors_expr(y)):
        return DescendantAnswer(True, x, y)
    if y in extension(interp, ancestors_expr(x)):
        return DescendantAnswer(True, y, x)
    return DescendantAnswer(False)


def cq7_common_ancestors(interp: Interpretation, x: str, y: str) -> QueryResult:
    _require(interp, x, y)
    return evaluate(interp, common_ancestors_expr(x, y))


def cq8_mrca(interp: Interpretation, x: str, y: str) -> QueryResult:
    _require(interp, x, y)
    return evaluate(interp, mrca_expr(x, y))


def cq9_exclusive_ancestor(interp: Interpretation, x: str, y: str) -> QueryResult:
    _require(interp, x, y)
    return evaluate(interp, exclusive_ancestor_expr(x, y))


def run_cq(interp: Interpretation, number: int, x: str | None = None, y: str | None = None):
    """Dispatch competency question ``number`` (1-9)."""
    unary = {1: cq1_roots, 3: cq3_leaves}
    single = {2: cq2_ancestors, 4: cq4_descendants, 5: cq5_leaf_descendants}
    pair = {6: cq6_is_descendant, 7: cq7_common_ancestors, 8: cq8_mrca, 9: cq9_exclusive_ancestor}
    if number in unary:
        return unary[number](interp)
    if number in single:
        if x is None:
            raise ValueError(f"CQ{number} needs a node x")
        return single[number](interp, x)
    if number in pair:
        if x is None or y is None:
            raise ValueError(f"CQ{number} needs nodes x and y")
        return pair[number](interp, x, y)
    raise ValueError(f"no competency question {number}")


# -- oracles -------------------------------------------------------------------

def _parent_map(interp: Interpretation) -> dict[str, str | None]:
    cached = interp._memo.get("oracle-parents")
    if cached is not None:
        return cached
    report = validate_structure(interp)
    if not report.is_tree:
        raise NotATree(report)
    parent: dict[str, str | None] = {n: None for n in interp.domain}
    for p, c in interp.role(HAS_CHILD):
        parent[c] = p
    for c, p in interp.role(HAS_PARENT):
        parent[c] = p
    interp._memo["oracle-parents"] = parent
    return parent


def _root_path(parent: dict, x: str) -> list[str]:
    """``x`` followed by its ancestors up to the root."""
    path = [x]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path


def oracle_ancestors(interp: Interpretation, x: str) -> list[str]:
    """Strict ancestors of ``x``, nearest first."""
    parent = _parent_map(interp)
    if x not in parent:
        raise UnknownNode(x)
    return _root_path(parent, x)[1:]


def oracle_mrca(interp: Interpretation, x: str, y: str) -> str:
    """Deepest node that is an ancestor-or-self of both ``x`` and ``y``."""
    parent = _parent_map(interp)
    for n in (x, y):
        if n not in parent:
            raise UnknownNode(n)
    px, py = _root_path(parent, x), _root_path(parent, y)
    # align depths, then climb in lockstep
    while len(px) > len(py):
        px.pop(0)
    while len(py) > len(px):
        py.pop(0)
    while px[0] != py[0]:
        px.pop(0)
        py.pop(0)
    return px[0]


def oracle_exclusive(interp: Interpretation, x: str, y: str) -> str | None:
    """Highest node on the path from ``x`` to the root whose subtree does not contain ``y``.

    None when ``x`` is an ancestor-or-self of ``y``.
    """
    parent = _parent_map(interp)
    for n in (x, y):
        if n not in parent:
            raise UnknownNode(n)
    on_y_path = set(_root_path(parent, y))
    best = None
    for v in _root_path(parent, x):
        if v in on_y_path:
            break
        best = v
    return best


def is_separated(interp: Interpretation, x: str, y: str) -> bool:
    """Neither node is an ancestor-or-self of the other."""
    parent = _parent_map(interp)
    return x not in _root_path(parent, y) and y not in _root_path(parent, x)
