import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_closure, children_of, parents_of
from treeodp import (
    MaterializeOptions, TreeAbox, abox_to_interpretation, diff_interpretations, example_tree,
    materialize, parse_newick, random_tree,
)
from treeodp.core import describe_tree
from treeodp.errors import ConflictingOutDegree, NBoundExceeded
from treeodp.materialize import compose, transitive_closure


def _bare(abox):
    """The hasChild edges plus one TreeNode typing on an arbitrary node; the rest must be derived."""
    seed = min(abox.individuals)
    return TreeAbox.build(concepts=[(seed, "TreeNode")],
                          roles=[f for f in abox.role_assertions if f[0] == "hasChild"])


def test_descendant_count(example_m):
    # sum of node depths: 0+1+1+2+2+2
    assert len(example_m.role("hasDescendant")) == 8
    assert example_m.role("hasDescendant") == brute_closure(example_m.role("hasChild"))


def test_siblings_exact(example_m):
    assert example_m.role("hasSibling") == {("b", "c"), ("c", "b"), ("d", "e"), ("e", "d")}


def test_inverses(example_m):
    assert example_m.role("hasParent") == {(o, s) for s, o in example_m.role("hasChild")}
    assert example_m.role("hasAncestor") == {(o, s) for s, o in example_m.role("hasDescendant")}


def test_everything_is_a_tree_node(example_m):
    assert example_m.concept("TreeNode") == example_m.domain


def test_classification_from_bare_edges(example, example_m):
    derived = materialize(_bare(example))
    assert derived.concept("RootNode") == {"a"}
    assert derived.concept("LeafNode") == {"d", "e", "f"}
    assert derived.out_degree == {"a": 2, "b": 2, "c": 1, "d": 0, "e": 0, "f": 0}
    assert derived.roles == example_m.roles


def test_single_node():
    interp = materialize(TreeAbox.build(concepts=[("x", "TreeNode")]))
    assert interp.concept("RootNode") == {"x"} and interp.concept("LeafNode") == {"x"}
    assert interp.out_degree == {"x": 0}


def test_conflicting_out_degree():
    abox = TreeAbox.build(concepts=[("a", "TreeNode")], roles=[("hasChild", "a", "b")],
                          out_degrees={"a": 3})
    with pytest.raises(ConflictingOutDegree):
        materialize(abox)


def test_untyped_edges_stay_unclassified():
    # TreeNode only spreads from a typed node, so bare edges derive roles but no classes
    interp = materialize(TreeAbox.build(roles=[("hasChild", "a", "b")]))
    assert interp.role("hasParent") == {("b", "a")}
    assert interp.concepts == {} and interp.out_degree == {}


def test_options_toggle_rules(example):
    bare = _bare(example)
    assert materialize(bare, derive_siblings_by_rule=False).role("hasSibling") == frozenset()
    assert materialize(bare, compute_out_degrees=False).out_degree == {}
    with pytest.raises(ValueError):
        MaterializeOptions(n_bound=0)


def test_n_bound_encoding(example):
    interp = materialize(example, n_bound=2)
    assert interp.concept("Child_1") == {"a", "b", "d", "f"}
    assert interp.concept("Child_2") == {"c", "e"}
    assert interp.role("R_1") == {(x, x) for x in ("a", "b", "d", "f")}
    assert interp.concept("nBoundedTreeNode") == interp.domain


def test_chain_siblings_equal_rule_siblings_on_example(example):
    bare = _bare(example)
    by_chain = materialize(bare, n_bound=2, derive_siblings_by_rule=False)
    by_rule = materialize(bare)
    assert by_chain.role("hasSibling") == by_rule.role("hasSibling")


def test_n_bound_exceeded():
    abox = describe_tree({"r": ["a", "b", "c"]})
    with pytest.raises(NBoundExceeded) as info:
        materialize(abox, n_bound=2)
    assert (info.value.node, info.value.child_count, info.value.bound) == ("r", 3, 2)


def test_fact_delta(example):
    raw = abox_to_interpretation(example)
    done = materialize(example)
    assert diff_interpretations(raw, raw).is_empty()
    delta = diff_interpretations(raw, done)
    assert ("hasParent", "b", "a") in delta.added.role_assertions
    assert delta.removed.is_empty()
    assert diff_interpretations(done, materialize(done)).is_empty()


def test_closure_helpers():
    assert transitive_closure({(1, 2), (2, 3), (3, 1)}) == {(a, b) for a in (1, 2, 3) for b in (1, 2, 3)}
    assert compose({(1, 2)}, {(2, 3), (2, 4)}, {(4, 5)}) == {(1, 5)}


def _brute_siblings(abox):
    parent = parents_of(abox)
    return {(x, y) for x in parent for y in parent if x != y and parent[x] == parent[y]}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 80), st.integers(1, 4))
def test_materialization_matches_brute_force(seed, size, branching):
    tree = random_tree(seed, size, branching)
    interp = materialize(_bare(tree))
    edges = interp.role("hasChild")
    assert interp.role("hasDescendant") == brute_closure(edges)
    assert interp.role("hasSibling") == _brute_siblings(tree)
    kids = children_of(tree)
    assert interp.out_degree == {n: len(kids.get(n, ())) for n in tree.individuals}
    assert interp.concept("LeafNode") == {n for n in tree.individuals if not kids.get(n)}
    assert interp.concept("RootNode") == tree.individuals - set(parents_of(tree))
    assert diff_interpretations(interp, materialize(interp)).is_empty()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 60), st.sampled_from([1, 2, 3, 5]))
def test_chain_siblings_match_rule(seed, size, n):
    bare = _bare(random_tree(seed, size, n))
    by_chain = materialize(bare, n_bound=n, derive_siblings_by_rule=False)
    assert by_chain.role("hasSibling") == materialize(bare).role("hasSibling")


def test_cycle_closure_is_reflexive():
    from treeodp import make_cycle
    interp = materialize(make_cycle(3))
    assert ("c1", "c1") in interp.role("hasDescendant")
    assert len(interp.role("hasDescendant")) == 9
