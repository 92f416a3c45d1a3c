"""Forward-chaining materialization of the tree pattern under a closed-world reading.

The engine repeats two strata until nothing changes:

1. monotone role and class rules: inverse roles, descendant closure,
   the parent/child sibling rule (identity pairs excluded), sibling symmetry,
   and ``TreeNode`` propagation along every pattern role;
2. closed-world classification: ``RootNode``/``LeafNode`` for tree nodes
   without parent/child, out-degree as the exact child count and, when a bound
   ``n`` is given, the ``Child_i`` ranks, ``R_i`` self loops and the
   ``R_i ∘ hasParent ∘ hasChild ∘ R_j`` sibling chains.

Asserted facts are never retracted; contradictions raise.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .core import (
    HAS_ANCESTOR, HAS_CHILD, HAS_DESCENDANT, HAS_PARENT, HAS_SIBLING, LEAF_NODE,
    N_BOUNDED_TREE_NODE, ROOT_NODE, TREE_NODE, Interpretation, TreeAbox,
    abox_to_interpretation, child_concept, self_role,
)
from .errors import ConflictingOutDegree, NBoundExceeded

# roles along which TreeNode membership propagates (∀r.TreeNode axioms)
TREE_ROLES = (HAS_CHILD, HAS_DESCENDANT, HAS_PARENT, HAS_SIBLING, HAS_ANCESTOR)


@dataclass(frozen=True)
class MaterializeOptions:
    n_bound: int | None = None
    derive_siblings_by_rule: bool = True
    compute_out_degrees: bool = True

    def __post_init__(self):
        if self.n_bound is not None and self.n_bound < 1:
            raise ValueError("n_bound must be >= 1")


@dataclass(frozen=True)
class FactDelta:
    """Facts present only on the right (``added``) or only on the left (``removed``)."""

    added: TreeAbox
    removed: TreeAbox

    def is_empty(self) -> bool:
        return self.added.is_empty() and self.removed.is_empty()

    def __bool__(self) -> bool:
        return not self.is_empty()


def diff_interpretations(a: Interpretation, b: Interpretation) -> FactDelta:
    fa, fb = a.to_abox(), b.to_abox()
    return FactDelta(
        added=TreeAbox(fb.concept_assertions - fa.concept_assertions,
                       fb.role_assertions - fa.role_assertions,
                       fb.data_assertions - fa.data_assertions),
        removed=TreeAbox(fa.concept_assertions - fb.concept_assertions,
                         fa.role_assertions - fb.role_assertions,
                         fa.data_assertions - fb.data_assertions),
    )


def _inverse(pairs) -> set:
    return {(o, s) for s, o in pairs}


def _adjacency(pairs) -> dict[str, set[str]]:
    adj: dict[str, set[str]] = defaultdict(set)
    for s, o in pairs:
        adj[s].add(o)
    return adj


def transitive_closure(pairs) -> set[tuple[str, str]]:
    """Transitive closure by depth-first search from every source node."""
    adj = _adjacency(pairs)
    out = set()
    for start in list(adj):
        seen: set[str] = set()
        stack = list(adj[start])
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(adj.get(v, ()))
        out.update((start, v) for v in seen)
    return out


def compose(*relations) -> set[tuple[str, str]]:
    """Relational composition ``r1 ∘ r2 ∘ ...`` (apply ``r1`` first)."""
    current = set(relations[0])
    for rel in relations[1:]:
        adj = _adjacency(rel)
        current = {(x, z) for x, y in current for z in adj.get(y, ())}
    return current


class _State:
    def __init__(self, interp: Interpretation):
        self.concepts: dict[str, set] = defaultdict(set)
        self.roles: dict[str, set] = defaultdict(set)
        for c, ext in interp.concepts.items():
            self.concepts[c] |= ext
        for r, ext in interp.roles.items():
            self.roles[r] |= ext
        self.out_degree = dict(interp.out_degree)
        self.asserted_degree = dict(interp.out_degree)
        self.domain = interp.domain

    def size(self) -> int:
        return (sum(map(len, self.concepts.values())) + sum(map(len, self.roles.values()))
                + len(self.out_degree))


def _close_roles(st: _State, opts: MaterializeOptions) -> None:
    roles = st.roles
    roles[HAS_CHILD] |= _inverse(roles[HAS_PARENT])
    roles[HAS_PARENT] |= _inverse(roles[HAS_CHILD])
    desc = roles[HAS_DESCENDANT] | roles[HAS_CHILD] | _inverse(roles[HAS_ANCESTOR])
    roles[HAS_DESCENDANT] = transitive_closure(desc)
    roles[HAS_ANCESTOR] = _inverse(roles[HAS_DESCENDANT])
    if opts.derive_siblings_by_rule:
        roles[HAS_SIBLING] |= {(x, z) for x, z in compose(roles[HAS_PARENT], roles[HAS_CHILD]) if x != z}
    roles[HAS_SIBLING] |= _inverse(roles[HAS_SIBLING])


def _propagate_tree_nodes(st: _State) -> None:
    tree = st.concepts[TREE_NODE]
    for c in (LEAF_NODE, ROOT_NODE, N_BOUNDED_TREE_NODE):
        tree |= st.concepts[c]
    adj: dict[str, set] = defaultdict(set)
    for r in TREE_ROLES:
        for s, o in st.roles[r]:
            adj[s].add(o)
    stack = list(tree)
    while stack:
        for o in adj.get(stack.pop(), ()):
            if o not in tree:
                tree.add(o)
                stack.append(o)


def _classify(st: _State, opts: MaterializeOptions) -> None:
    tree = st.concepts[TREE_NODE]
    children = _adjacency(st.roles[HAS_CHILD])
    parents = _adjacency(st.roles[HAS_PARENT])
    for x in tree:
        if not parents.get(x):
            st.concepts[ROOT_NODE].add(x)
        if not children.get(x):
            st.concepts[LEAF_NODE].add(x)
    if opts.compute_out_degrees:
        for x in sorted(tree):
            count = len(children.get(x, ()))
            asserted = st.asserted_degree.get(x)
            if asserted is not None and asserted != count:
                raise ConflictingOutDegree(x, asserted, count)
            st.out_degree[x] = count
    if opts.n_bound is not None:
        _assign_child_ranks(st, opts.n_bound, tree, children, parents)


def _assign_child_ranks(st: _State, n: int, tree, children, parents) -> None:
    for x in sorted(tree):
        count = len(children.get(x, ()))
        if count > n:
            raise NBoundExceeded(x, count, n)
    for x in tree:
        st.concepts[N_BOUNDED_TREE_NODE].add(x)
        if not parents.get(x):
            st.concepts[child_concept(1)].add(x)
    for p in tree:
        for rank, c in enumerate(sorted(children.get(p, ())), start=1):
            st.concepts[child_concept(rank)].add(c)
    for i in range(1, n + 1):
        st.roles[self_role(i)] |= {(x, x) for x in st.concepts[child_concept(i)]}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            st.roles[HAS_SIBLING] |= compose(st.roles[self_role(i)], st.roles[HAS_PARENT],
                                             st.roles[HAS_CHILD], st.roles[self_role(j)])


def materialize(source: TreeAbox | Interpretation,
                opts: MaterializeOptions | None = None, **kwargs) -> Interpretation:
    """Least fixpoint of the pattern rules over ``source``.

    Options may be given as a :class:`MaterializeOptions` or as keyword
    arguments (``n_bound=2``). An :class:`Interpretation` input is read as the
    ABox of its facts, so re-materializing an output is a no-op.
    """
    if opts is None:
        opts = MaterializeOptions(**kwargs)
    elif kwargs:
        raise TypeError("pass either opts or keyword options, not both")
    interp = source if isinstance(source, Interpretation) else abox_to_interpretation(source)
    st = _State(interp)
    previous = -1
    while st.size() != previous:
        previous = st.size()
        _close_roles(st, opts)
        _propagate_tree_nodes(st)
        _classify(st, opts)
    return Interpretation(st.domain, st.concepts, st.roles, st.out_degree, materialized=True)
