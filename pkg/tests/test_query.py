import pytest
from hypothesis import given, settings, strategies as st

from conftest import parents_of
from treeodp import (
    abox_to_interpretation, cq1_roots, cq2_ancestors, cq3_leaves, cq4_descendants,
    cq5_leaf_descendants, cq6_is_descendant, cq7_common_ancestors, cq8_mrca,
    cq9_exclusive_ancestor, evaluate, make_forest, materialize, oracle_ancestors,
    oracle_exclusive, oracle_mrca, parse_expression, parse_newick, random_tree, run_cq, to_sexpr,
)
from treeodp.errors import ExpressionSyntaxError, NotATree, NotMaterialized, UnknownNode, UnknownTerm
from treeodp.expressions import AtomicConcept, Exists, Nominal, Not


def test_eval_examples(example_m):
    assert evaluate(example_m, AtomicConcept("LeafNode")).nodes == ("d", "e", "f")
    assert evaluate(example_m, Not(AtomicConcept("TreeNode"))).nodes == ()
    assert evaluate(example_m, Exists("hasDescendant", Nominal("f"))).nodes == ("a", "c")


def test_roots_and_leaves(example_m):
    assert cq1_roots(example_m).as_set() == {"a"}
    assert cq3_leaves(example_m).as_set() == {"d", "e", "f"}
    single = materialize(parse_newick("x;"))
    assert cq1_roots(single).nodes == cq3_leaves(single).nodes == ("x",)


def test_ancestors_and_descendants(example_m):
    assert cq2_ancestors(example_m, "d").as_set() == {"a", "b"}
    assert cq2_ancestors(example_m, "a").nodes == ()
    assert cq4_descendants(example_m, "a").as_set() == {"b", "c", "d", "e", "f"}
    assert cq5_leaf_descendants(example_m, "b").as_set() == {"d", "e"}


def test_is_descendant(example_m):
    answer = cq6_is_descendant(example_m, "a", "f")
    assert answer and answer.ancestor == "a" and answer.descendant == "f"
    assert cq6_is_descendant(example_m, "f", "a").ancestor == "a"
    assert not cq6_is_descendant(example_m, "d", "e")
    assert not cq6_is_descendant(example_m, "d", "d")


def test_common_ancestors(example_m):
    assert cq7_common_ancestors(example_m, "d", "f").as_set() == {"a"}
    assert cq7_common_ancestors(example_m, "d", "e").as_set() == {"a", "b"}
    assert cq7_common_ancestors(example_m, "a", "a").nodes == ()


def test_mrca(example_m):
    assert cq8_mrca(example_m, "d", "e").nodes == ("b",)
    assert cq8_mrca(example_m, "d", "f").nodes == ("a",)
    # the class description is empty when one node descends from the other
    assert cq8_mrca(example_m, "b", "d").nodes == ()
    assert oracle_mrca(example_m, "b", "d") == "b"


def test_exclusive_ancestor(example_m):
    assert cq9_exclusive_ancestor(example_m, "d", "f").nodes == ("b",)
    assert cq9_exclusive_ancestor(example_m, "d", "e").nodes == ("d",)
    assert cq9_exclusive_ancestor(example_m, "d", "b").nodes == ()
    assert oracle_exclusive(example_m, "d", "f") == "b"
    assert oracle_exclusive(example_m, "b", "d") is None


def test_oracles(example_m):
    assert oracle_mrca(example_m, "d", "e") == "b"
    assert oracle_ancestors(example_m, "d") == ["b", "a"]


def test_run_cq_dispatch(example_m):
    assert run_cq(example_m, 8, "d", "e").nodes == ("b",)
    assert run_cq(example_m, 1).nodes == ("a",)
    with pytest.raises(ValueError):
        run_cq(example_m, 2)
    with pytest.raises(ValueError):
        run_cq(example_m, 10)


def test_guards(example, example_m):
    with pytest.raises(NotMaterialized):
        cq1_roots(abox_to_interpretation(example))
    with pytest.raises(UnknownNode):
        cq2_ancestors(example_m, "zz")
    with pytest.raises(UnknownNode):
        evaluate(example_m, Nominal("zz"))
    with pytest.raises(UnknownTerm):
        evaluate(example_m, AtomicConcept("Person"))
    with pytest.raises(NotATree):
        oracle_mrca(materialize(make_forest(2)), "t1_d", "t2_d")


def test_expression_syntax_round_trip():
    text = "(and TreeNode (some hasChild (or {d} (not LeafNode))))"
    expr = parse_expression(text)
    assert parse_expression(to_sexpr(expr)) == expr
    for src in ["(min 2 hasChild top)", "(all (inv hasParent) TreeNode)", "(outdeg 2)",
                "(outdeg>= 1)", "(self R_1)", "(exactly 1 hasParent top)", "bottom"]:
        assert parse_expression(to_sexpr(parse_expression(src))) == parse_expression(src)


def test_expression_syntax_errors():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression("(and TreeNode")
    assert info.value.offset >= 0
    with pytest.raises(ExpressionSyntaxError):
        parse_expression("(frobnicate x)")


def test_parsed_expression_evaluates(example_m):
    expr = parse_expression("(and LeafNode (some hasAncestor {b}))")
    assert evaluate(example_m, expr).nodes == ("d", "e")
    assert evaluate(example_m, parse_expression("(min 2 hasChild top)")).nodes == ("a", "b")
    assert evaluate(example_m, parse_expression("(outdeg 1)")).nodes == ("c",)


def _ancestor_sets(tree):
    parent = parents_of(tree)
    out = {}
    for n in tree.individuals:
        chain, cur = set(), n
        while cur in parent:
            cur = parent[cur]
            chain.add(cur)
        out[n] = chain
    return out


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 30), st.integers(1, 4))
def test_queries_match_oracles(seed, size, branching):
    tree = random_tree(seed, size, branching)
    interp = materialize(tree)
    anc = _ancestor_sets(tree)
    nodes = sorted(tree.individuals)
    for x in nodes:
        assert cq2_ancestors(interp, x).as_set() == anc[x]
        assert set(oracle_ancestors(interp, x)) == anc[x]
        for y in nodes:
            assert cq7_common_ancestors(interp, x, y).as_set() == anc[x] & anc[y]
            if x != y and x not in anc[y] and y not in anc[x]:
                assert cq8_mrca(interp, x, y).nodes == (oracle_mrca(interp, x, y),)
                assert cq9_exclusive_ancestor(interp, x, y).nodes == (oracle_exclusive(interp, x, y),)
            else:
                assert cq8_mrca(interp, x, y).nodes == ()
