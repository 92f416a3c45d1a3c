"""Domain model: pattern vocabulary, ABoxes, finite interpretations, generators.

Facts are plain tuples so that ABoxes compare by fact-set equality:

* concept assertion: ``(node, concept)``
* role assertion: ``(role, subject, object)``
* data assertion: ``(node, "hasOutDegree", value)``

Node identifiers are plain local names; a namespace is attached only when
serializing. Lexicographic order of names is the single tie-breaker used
everywhere (child ranks, serialization order, witness order).
"""

from __future__ import annotations

import random
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import DuplicateOutDegree, UnknownTerm

TREE_NODE = "TreeNode"
ROOT_NODE = "RootNode"
LEAF_NODE = "LeafNode"
N_BOUNDED_TREE_NODE = "nBoundedTreeNode"
LIST_ITEM = "ListItem"
FIRST_LIST_ITEM = "FirstListItem"
LAST_LIST_ITEM = "LastListItem"

HAS_CHILD = "hasChild"
HAS_PARENT = "hasParent"
HAS_DESCENDANT = "hasDescendant"
HAS_ANCESTOR = "hasAncestor"
HAS_SIBLING = "hasSibling"
HAS_NEXT = "hasNext"
HAS_SUCCESSOR = "hasSuccessor"
FOLLOWS = "follows"
PRECEDES = "precedes"
DIRECTLY_FOLLOWS = "directlyFollows"
DIRECTLY_PRECEDES = "directlyPrecedes"

HAS_OUT_DEGREE = "hasOutDegree"

FIXED_CONCEPTS = frozenset({
    TREE_NODE, ROOT_NODE, LEAF_NODE, N_BOUNDED_TREE_NODE,
    LIST_ITEM, FIRST_LIST_ITEM, LAST_LIST_ITEM,
})
FIXED_ROLES = frozenset({
    HAS_CHILD, HAS_PARENT, HAS_DESCENDANT, HAS_ANCESTOR, HAS_SIBLING,
    HAS_NEXT, HAS_SUCCESSOR, FOLLOWS, PRECEDES, DIRECTLY_FOLLOWS, DIRECTLY_PRECEDES,
})
DATA_ROLES = frozenset({HAS_OUT_DEGREE})

_CHILD_RE = re.compile(r"Child_([1-9][0-9]*)\Z")
_SELF_ROLE_RE = re.compile(r"R_([1-9][0-9]*)\Z")


def child_concept(i: int) -> str:
    return f"Child_{i}"


def self_role(i: int) -> str:
    return f"R_{i}"


def child_index(concept: str) -> int | None:
    """Index ``i`` of a ``Child_i`` concept name, else None."""
    m = _CHILD_RE.match(concept)
    return int(m.group(1)) if m else None


def is_concept(name: str) -> bool:
    return name in FIXED_CONCEPTS or _CHILD_RE.match(name) is not None


def is_role(name: str) -> bool:
    return name in FIXED_ROLES or _SELF_ROLE_RE.match(name) is not None


def is_data_role(name: str) -> bool:
    return name in DATA_ROLES


@dataclass(frozen=True)
class Vocabulary:
    """The pattern vocabulary with ``Child_i``/``R_i`` indexed ``1..n``."""

    n: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")

    @property
    def concepts(self) -> frozenset[str]:
        return FIXED_CONCEPTS | {child_concept(i) for i in range(1, self.n + 1)}

    @property
    def roles(self) -> frozenset[str]:
        return FIXED_ROLES | {self_role(i) for i in range(1, self.n + 1)}

    @property
    def data_roles(self) -> frozenset[str]:
        return DATA_ROLES


def _check_node(node) -> str:
    if not isinstance(node, str) or not node:
        raise ValueError(f"node identifiers must be nonempty strings, got {node!r}")
    return node


@dataclass(frozen=True)
class TreeAbox:
    """An immutable set of assertions over named individuals.

    Two out-degree values for the same node are representable here (a parsed
    document may contain them); :func:`abox_to_interpretation` rejects them.
    """

    concept_assertions: frozenset = frozenset()
    role_assertions: frozenset = frozenset()
    data_assertions: frozenset = frozenset()

    def __post_init__(self):
        concepts = frozenset((_check_node(n), c) for n, c in self.concept_assertions)
        roles = frozenset((r, _check_node(s), _check_node(o)) for r, s, o in self.role_assertions)
        data = frozenset((_check_node(n), p, v) for n, p, v in self.data_assertions)
        for _, c in concepts:
            if not is_concept(c):
                raise UnknownTerm(c)
        for r, _, _ in roles:
            if not is_role(r):
                raise UnknownTerm(r)
        for _, p, v in data:
            if not is_data_role(p):
                raise UnknownTerm(p)
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise ValueError(f"out-degree must be a nonnegative integer, got {v!r}")
        object.__setattr__(self, "concept_assertions", concepts)
        object.__setattr__(self, "role_assertions", roles)
        object.__setattr__(self, "data_assertions", data)

    @classmethod
    def build(cls, concepts=(), roles=(), out_degrees: Mapping[str, int] | Iterable = ()) -> "TreeAbox":
        """Convenience constructor; ``out_degrees`` may be a mapping or (node, value) pairs."""
        items = out_degrees.items() if isinstance(out_degrees, Mapping) else out_degrees
        return cls(frozenset(concepts), frozenset(roles),
                   frozenset((n, HAS_OUT_DEGREE, v) for n, v in items))

    @property
    def individuals(self) -> frozenset[str]:
        nodes = {n for n, _ in self.concept_assertions}
        for _, s, o in self.role_assertions:
            nodes.add(s)
            nodes.add(o)
        nodes.update(n for n, _, _ in self.data_assertions)
        return frozenset(nodes)

    def __len__(self) -> int:
        return len(self.concept_assertions) + len(self.role_assertions) + len(self.data_assertions)

    def is_empty(self) -> bool:
        return len(self) == 0

    def role(self, name: str) -> frozenset[tuple[str, str]]:
        return frozenset((s, o) for r, s, o in self.role_assertions if r == name)

    def concept(self, name: str) -> frozenset[str]:
        return frozenset(n for n, c in self.concept_assertions if c == name)

    def without_roles(self, names: Iterable[str]) -> "TreeAbox":
        drop = set(names)
        return TreeAbox(self.concept_assertions,
                        frozenset(f for f in self.role_assertions if f[0] not in drop),
                        self.data_assertions)

    def without_concepts(self, names: Iterable[str]) -> "TreeAbox":
        drop = set(names)
        return TreeAbox(frozenset(f for f in self.concept_assertions if f[1] not in drop),
                        self.role_assertions, self.data_assertions)

    def without_out_degrees(self) -> "TreeAbox":
        return TreeAbox(self.concept_assertions, self.role_assertions)

    def union(self, other: "TreeAbox") -> "TreeAbox":
        return TreeAbox(self.concept_assertions | other.concept_assertions,
                        self.role_assertions | other.role_assertions,
                        self.data_assertions | other.data_assertions)

    def sorted_facts(self) -> list[tuple]:
        """All facts in canonical order, tagged by kind."""
        out: list[tuple] = [("concept", n, c) for n, c in sorted(self.concept_assertions)]
        out += [("role", r, s, o) for r, s, o in sorted(self.role_assertions)]
        out += [("data", n, p, v) for n, p, v in sorted(self.data_assertions)]
        return out


@dataclass(frozen=True)
class Interpretation:
    """A finite interpretation over the pattern vocabulary.

    Empty extensions are dropped on construction so that equality is
    fact-set equality. ``materialized`` records provenance only and does not
    take part in comparisons.
    """

    domain: frozenset
    concepts: Mapping[str, frozenset] = field(default_factory=dict)
    roles: Mapping[str, frozenset] = field(default_factory=dict)
    out_degree: Mapping[str, int] = field(default_factory=dict)
    materialized: bool = field(default=False, compare=False)
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        domain = frozenset(self.domain)
        concepts = {c: frozenset(ext) for c, ext in self.concepts.items() if ext}
        roles = {r: frozenset(ext) for r, ext in self.roles.items() if ext}
        out_degree = dict(self.out_degree)
        for c, ext in concepts.items():
            if not is_concept(c):
                raise UnknownTerm(c)
            if not ext <= domain:
                raise ValueError(f"extension of {c} leaves the domain: {sorted(ext - domain)}")
        for r, ext in roles.items():
            if not is_role(r):
                raise UnknownTerm(r)
            for s, o in ext:
                if s not in domain or o not in domain:
                    raise ValueError(f"pair ({s}, {o}) of {r} leaves the domain")
        if not out_degree.keys() <= domain:
            raise ValueError("out-degree keys must lie in the domain")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "concepts", concepts)
        object.__setattr__(self, "roles", roles)
        object.__setattr__(self, "out_degree", out_degree)

    def concept(self, name: str) -> frozenset[str]:
        return self.concepts.get(name, frozenset())

    def role(self, name: str) -> frozenset[tuple[str, str]]:
        return self.roles.get(name, frozenset())

    def successors(self, role: str) -> dict[str, set[str]]:
        """Adjacency map of ``role``; cached per interpretation."""
        key = ("succ", role)
        if key not in self._memo:
            adj: dict[str, set[str]] = defaultdict(set)
            for s, o in self.role(role):
                adj[s].add(o)
            self._memo[key] = dict(adj)
        return self._memo[key]

    def predecessors(self, role: str) -> dict[str, set[str]]:
        key = ("pred", role)
        if key not in self._memo:
            adj: dict[str, set[str]] = defaultdict(set)
            for s, o in self.role(role):
                adj[o].add(s)
            self._memo[key] = dict(adj)
        return self._memo[key]

    def to_abox(self) -> TreeAbox:
        return TreeAbox(
            frozenset((n, c) for c, ext in self.concepts.items() for n in ext),
            frozenset((r, s, o) for r, ext in self.roles.items() for s, o in ext),
            frozenset((n, HAS_OUT_DEGREE, v) for n, v in self.out_degree.items()),
        )

    def __len__(self) -> int:
        return (sum(map(len, self.concepts.values())) + sum(map(len, self.roles.values()))
                + len(self.out_degree))


def abox_to_interpretation(abox: TreeAbox) -> Interpretation:
    """Closed-world reading of an ABox: extensions are exactly the asserted facts."""
    concepts: dict[str, set] = defaultdict(set)
    roles: dict[str, set] = defaultdict(set)
    out_degree: dict[str, int] = {}
    for n, c in abox.concept_assertions:
        concepts[c].add(n)
    for r, s, o in abox.role_assertions:
        roles[r].add((s, o))
    for n, _, v in sorted(abox.data_assertions):
        if n in out_degree and out_degree[n] != v:
            raise DuplicateOutDegree(n, (out_degree[n], v))
        out_degree[n] = v
    return Interpretation(abox.individuals, concepts, roles, out_degree)


# -- structural validation ----------------------------------------------------

def _child_edges(source: TreeAbox | Interpretation) -> tuple[frozenset, set]:
    if isinstance(source, Interpretation):
        nodes = source.domain
        child, parent = source.role(HAS_CHILD), source.role(HAS_PARENT)
    else:
        nodes = source.individuals
        child, parent = source.role(HAS_CHILD), source.role(HAS_PARENT)
    return nodes, set(child) | {(p, c) for c, p in parent}


@dataclass(frozen=True)
class StructuralReport:
    """Verdict of the rooted-tree conditions over the ``hasChild`` graph."""

    roots: tuple[str, ...]
    multi_parent: tuple[str, ...]
    unreachable: tuple[str, ...]
    child_counts: Mapping[str, int]

    @property
    def root_count(self) -> int:
        return len(self.roots)

    @property
    def is_tree(self) -> bool:
        return self.root_count == 1 and not self.multi_parent and not self.unreachable

    @property
    def arity(self) -> int:
        """Least n such that every node has at most n children."""
        return max(self.child_counts.values(), default=0)

    def is_n_bounded(self, n: int) -> bool:
        return self.is_tree and self.arity <= n

    def is_n_ary(self, n: int) -> bool:
        """Every non-leaf node has exactly ``n`` children."""
        return self.is_tree and all(k in (0, n) for k in self.child_counts.values())

    @property
    def is_binary(self) -> bool:
        return self.is_n_ary(2)

    def as_dict(self) -> dict:
        return {
            "isTree": self.is_tree,
            "rootCount": self.root_count,
            "roots": list(self.roots),
            "multiParent": list(self.multi_parent),
            "unreachable": list(self.unreachable),
            "arity": self.arity,
            "isBinary": self.is_binary,
            "nodeCount": len(self.child_counts),
        }


def validate_structure(source: TreeAbox | Interpretation) -> StructuralReport:
    """Check the rooted directed tree conditions on ``hasChild`` (and inverse ``hasParent``).

    Reachability is measured from all parentless nodes, so a forest reports
    its extra roots through ``root_count`` and a cycle reports every node as
    unreachable.
    """
    nodes, edges = _child_edges(source)
    children: dict[str, set] = {n: set() for n in nodes}
    parents: dict[str, set] = {n: set() for n in nodes}
    for p, c in edges:
        children[p].add(c)
        parents[c].add(p)
    roots = sorted(n for n in nodes if not parents[n])
    seen = set(roots)
    stack = list(roots)
    while stack:
        for c in children[stack.pop()]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return StructuralReport(
        roots=tuple(roots),
        multi_parent=tuple(sorted(n for n in nodes if len(parents[n]) > 1)),
        unreachable=tuple(sorted(nodes - seen)),
        child_counts={n: len(children[n]) for n in sorted(nodes)},
    )


# -- generators ----------------------------------------------------------------

def describe_tree(children: Mapping[str, Iterable[str]], nodes: Iterable[str] = ()) -> TreeAbox:
    """ABox for a tree given as a parent -> children map.

    Follows the assertion style of the worked example ABox: every node gets its
    most specific class only (``RootNode``, ``LeafNode``, else ``TreeNode``),
    every node gets its out-degree, and each sibling pair is asserted once in
    name order.
    """
    kids = {p: sorted(cs) for p, cs in children.items()}
    all_nodes = set(nodes) | set(kids)
    for cs in kids.values():
        all_nodes.update(cs)
    has_parent = {c for cs in kids.values() for c in cs}
    concepts, roles, degrees = set(), set(), {}
    for n in all_nodes:
        cs = kids.get(n, [])
        degrees[n] = len(cs)
        if n not in has_parent:
            concepts.add((n, ROOT_NODE))
        if not cs:
            concepts.add((n, LEAF_NODE))
        if n in has_parent and cs:
            concepts.add((n, TREE_NODE))
        for i, c in enumerate(cs):
            roles.add((HAS_CHILD, n, c))
            for d in cs[i + 1:]:
                roles.add((HAS_SIBLING, c, d))
    return TreeAbox.build(concepts, roles, degrees)


def example_tree() -> TreeAbox:
    """The six-node worked example: root ``a`` with children ``b``, ``c``; ``b`` -> ``d``, ``e``; ``c`` -> ``f``."""
    return TreeAbox.build(
        concepts=[("a", ROOT_NODE), ("d", LEAF_NODE), ("e", LEAF_NODE), ("f", LEAF_NODE),
                  ("b", TREE_NODE), ("c", TREE_NODE)],
        roles=[(HAS_CHILD, "a", "b"), (HAS_CHILD, "a", "c"), (HAS_CHILD, "b", "d"),
               (HAS_CHILD, "b", "e"), (HAS_CHILD, "c", "f"),
               (HAS_SIBLING, "b", "c"), (HAS_SIBLING, "d", "e")],
        out_degrees={"a": 2, "b": 2, "c": 1, "d": 0, "e": 0, "f": 0},
    )


def rename(abox: TreeAbox, mapping) -> TreeAbox:
    """Apply a node renaming (callable or mapping) to every fact."""
    f = mapping if callable(mapping) else mapping.__getitem__
    return TreeAbox(
        frozenset((f(n), c) for n, c in abox.concept_assertions),
        frozenset((r, f(s), f(o)) for r, s, o in abox.role_assertions),
        frozenset((f(n), p, v) for n, p, v in abox.data_assertions),
    )


def make_forest(copies: int) -> TreeAbox:
    """Disjoint union of renamed copies of :func:`example_tree` (``t1_a``, ``t2_a``, ...)."""
    if copies < 2:
        raise ValueError("a forest needs at least 2 copies")
    out = TreeAbox()
    for i in range(1, copies + 1):
        out = out.union(rename(example_tree(), lambda n, i=i: f"t{i}_{n}"))
    return out


def make_cycle(length: int) -> TreeAbox:
    """Nodes ``c1..cN`` with ``hasChild(ci, c(i mod N)+1)``, each a TreeNode of out-degree 1."""
    if length < 2:
        raise ValueError("a cycle needs at least 2 nodes")
    names = [f"c{i}" for i in range(1, length + 1)]
    return TreeAbox.build(
        concepts=[(n, TREE_NODE) for n in names],
        roles=[(HAS_CHILD, names[i], names[(i + 1) % length]) for i in range(length)],
        out_degrees={n: 1 for n in names},
    )


def random_tree(seed: int, node_count: int, max_branching: int) -> TreeAbox:
    """Random rooted tree; each new node attaches to a uniformly chosen non-full node.

    Node names are ``n`` plus a zero-padded index, so name order equals
    creation order. The result is a pure function of the arguments.
    """
    if node_count < 1:
        raise ValueError("node_count must be >= 1")
    if max_branching < 1:
        raise ValueError("max_branching must be >= 1")
    rng = random.Random(seed)
    width = max(3, len(str(node_count - 1)))
    names = [f"n{i:0{width}d}" for i in range(node_count)]
    children: dict[str, list[str]] = {names[0]: []}
    open_nodes = [names[0]]
    for name in names[1:]:
        parent = rng.choice(open_nodes)
        children[parent].append(name)
        children[name] = []
        if len(children[parent]) >= max_branching:
            open_nodes.remove(parent)
        open_nodes.append(name)
    return describe_tree(children)
