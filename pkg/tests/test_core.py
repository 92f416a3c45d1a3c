import pytest

from treeodp import (
    TreeAbox, abox_to_interpretation, example_tree, make_cycle, make_forest, random_tree,
    validate_structure,
)
from treeodp.core import Vocabulary, child_concept, describe_tree, is_concept, is_role, self_role
from treeodp.errors import DuplicateOutDegree, UnknownTerm


def test_example_has_the_five_edges(example):
    edges = {(s, o) for r, s, o in example.role_assertions if r == "hasChild"}
    assert edges == {("a", "b"), ("a", "c"), ("b", "d"), ("b", "e"), ("c", "f")}


def test_example_out_degrees_and_siblings(example):
    degrees = {n: v for n, _, v in example.data_assertions}
    assert degrees["c"] == 1 and degrees["f"] == 0
    assert degrees == {"a": 2, "b": 2, "c": 1, "d": 0, "e": 0, "f": 0}
    sibs = {(s, o) for r, s, o in example.role_assertions if r == "hasSibling"}
    assert sibs == {("b", "c"), ("d", "e")}


def test_example_classes(example):
    assert ("a", "RootNode") in example.concept_assertions
    assert {n for n, c in example.concept_assertions if c == "LeafNode"} == {"d", "e", "f"}


def test_interpretation_of_example(example):
    interp = abox_to_interpretation(example)
    assert len(interp.domain) == 6
    assert len(interp.role("hasChild")) == 5


def test_empty_abox():
    interp = abox_to_interpretation(TreeAbox.build())
    assert interp.domain == frozenset()
    assert validate_structure(TreeAbox.build()).root_count == 0


def test_duplicate_out_degree_rejected():
    abox = TreeAbox.build(out_degrees=[("a", 1), ("a", 2)])
    with pytest.raises(DuplicateOutDegree):
        abox_to_interpretation(abox)


def test_unknown_terms_rejected():
    with pytest.raises(UnknownTerm):
        TreeAbox.build(concepts=[("a", "Person")])
    with pytest.raises(UnknownTerm):
        TreeAbox.build(roles=[("hasFriend", "a", "b")])


def test_indexed_vocabulary():
    assert child_concept(3) == "Child_3" and self_role(2) == "R_2"
    assert is_concept("Child_12") and not is_concept("Child_0")
    assert is_role("R_1") and not is_role("R_x")
    v = Vocabulary(2)
    assert "Child_2" in v.concepts and "Child_3" not in v.concepts


def test_random_tree_edge_count():
    abox = random_tree(1, 50, 4)
    interp = abox_to_interpretation(abox)
    assert len(interp.domain) == 50
    assert len(interp.role("hasChild")) == 49


def test_random_tree_single_node():
    abox = random_tree(5, 1, 3)
    (node,) = abox.individuals
    assert {(node, "RootNode"), (node, "LeafNode")} <= abox.concept_assertions
    assert abox.data_assertions == {(node, "hasOutDegree", 0)}


def test_random_tree_is_a_tree_and_respects_branching():
    report = validate_structure(random_tree(7, 200, 3))
    assert report.is_tree
    assert report.arity <= 3 and report.is_n_bounded(3)


def test_random_tree_deterministic():
    assert random_tree(11, 80, 4).sorted_facts() == random_tree(11, 80, 4).sorted_facts()
    assert random_tree(11, 80, 4) != random_tree(12, 80, 4)


def test_forest_two_copies():
    abox = make_forest(2)
    report = validate_structure(abox)
    assert len(abox.individuals) == 12
    assert report.root_count == 2 and not report.is_tree


def test_forest_three_copies():
    abox = make_forest(3)
    assert len(abox.individuals) == 18
    assert len(abox.role("hasChild")) == 15


def test_cycle_three():
    report = validate_structure(make_cycle(3))
    assert report.root_count == 0 and not report.is_tree
    assert set(report.child_counts.values()) == {1}
    assert not report.multi_parent


def test_cycle_two():
    abox = make_cycle(2)
    assert len(abox.individuals) == 2 and len(abox.role("hasChild")) == 2


def test_multi_parent_detected():
    abox = TreeAbox.build(roles=[("hasChild", "a", "c"), ("hasChild", "b", "c")])
    report = validate_structure(abox)
    assert report.multi_parent == ("c",) and not report.is_tree


def test_unreachable_cycle_beside_a_root():
    abox = TreeAbox.build(roles=[("hasChild", "r", "x"), ("hasChild", "p", "q"), ("hasChild", "q", "p")])
    report = validate_structure(abox)
    assert report.roots == ("r",)
    assert set(report.unreachable) == {"p", "q"}
    assert not report.is_tree


def test_parent_assertions_count_as_edges():
    abox = TreeAbox.build(roles=[("hasParent", "b", "a")])
    assert validate_structure(abox).roots == ("a",)


def test_arity_classification(example):
    report = validate_structure(example)
    assert report.arity == 2
    assert report.is_n_bounded(2) and not report.is_n_bounded(1)
    # c has a single child, and binary means exactly two children per inner node
    assert not report.is_binary and not report.is_n_ary(2)
    assert validate_structure(describe_tree({"a": ["b", "c"], "b": ["d", "e"]})).is_binary
    chain = describe_tree({"a": ["b"], "b": ["c"]})
    assert validate_structure(chain).is_n_ary(1)


def test_describe_tree_matches_example(example):
    assert describe_tree({"a": ["b", "c"], "b": ["d", "e"], "c": ["f"]}) == example
