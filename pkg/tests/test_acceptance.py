"""Acceptance criteria, one test each.

Every test prints a single PASS/FAIL line with its elapsed time and time
limit; the lines are repeated in the terminal summary.
"""

import subprocess
import sys
import time

import pytest

from conftest import ACCEPTANCE_LINES, brute_closure, parents_of
from treeodp import (
    ExportOptions, TreeAbox, check_all, cq1_roots, cq3_leaves, cq7_common_ancestors, cq8_mrca,
    cq9_exclusive_ancestor, diff_interpretations, example_tree, export_abox_turtle,
    export_functional, list_pattern_axioms, make_cycle, make_forest, materialize,
    n_bounded_axioms, oracle_exclusive, oracle_mrca, parse_abox_turtle, parse_newick, random_tree,
    sequence_pattern_axioms, summarize, tree_pattern_axioms, validate_structure, write_newick,
)
from treeodp.errors import (
    DuplicateLabel, EmptySubtree, NBoundExceeded, NewickSyntaxError, NonIntegerOutDegree,
    ReservedLabel, TrailingInput, TurtleSyntaxError, UnbalancedParentheses, UnknownTerm,
)
from treeodp.export import axiom_statements


def judge(number, title, limit, body):
    start = time.perf_counter()
    failure = None
    try:
        body()
    except AssertionError as exc:
        failure = str(exc) or "assertion failed"
    elapsed = time.perf_counter() - start
    if failure is None and elapsed >= limit:
        failure = f"took {elapsed:.2f}s"
    verdict = "PASS" if failure is None else "FAIL"
    line = f"[{number}] {verdict} {title} ({elapsed:.2f}s, limit {limit}s)"
    if failure:
        line += f": {failure.splitlines()[0]}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert failure is None, line


def _bare(tree):
    return TreeAbox.build(concepts=[(min(tree.individuals), "TreeNode")],
                          roles=[f for f in tree.role_assertions if f[0] == "hasChild"])


def test_1_example_fidelity():
    def body():
        interp = materialize(example_tree())
        results = check_all(interp, tree_pattern_axioms(True))
        assert summarize(results) == "28/28 satisfied", summarize(results)
        assert cq1_roots(interp).as_set() == {"a"}
        assert cq3_leaves(interp).as_set() == {"d", "e", "f"}
        assert interp.role("hasSibling") == {("b", "c"), ("c", "b"), ("d", "e"), ("e", "d")}
        assert len(interp.role("hasDescendant")) == 8
    judge(1, "example tree: 28/28 axioms, roots/leaves/siblings/descendants", 1, body)


def _oracle_trees():
    # five trees at the size cap, the rest spread over 2..160 nodes
    sizes = [200] * 5 + [2 + (k * 53) % 159 for k in range(95)]
    for seed, size in enumerate(sizes):
        yield random_tree(1000 + seed, size, 1 + seed % 4)


def _check_oracles(tree):
    interp = materialize(tree)
    parent = parents_of(tree)
    anc, depth = {}, {}
    for n in tree.individuals:
        chain, cur = [], n
        while cur in parent:
            cur = parent[cur]
            chain.append(cur)
        anc[n], depth[n] = set(chain), len(chain)
    assert interp.role("hasDescendant") == brute_closure(interp.role("hasChild"))
    nodes = sorted(tree.individuals)
    for x in nodes:
        for y in nodes:
            common = anc[x] & anc[y]
            assert cq7_common_ancestors(interp, x, y).as_set() == common, (x, y)
            if x == y or x in anc[y] or y in anc[x]:
                continue
            mrca = max(common, key=depth.__getitem__)
            assert oracle_mrca(interp, x, y) == mrca
            assert cq8_mrca(interp, x, y).nodes == (mrca,), (x, y)
            assert cq9_exclusive_ancestor(interp, x, y).nodes == (oracle_exclusive(interp, x, y),), (x, y)


def test_2_oracle_equivalence():
    def body():
        count = 0
        for tree in _oracle_trees():
            _check_oracles(tree)
            count += 1
        assert count >= 100
    judge(2, "100 random trees: cq7/cq8/cq9 and closure agree with oracles on all pairs", 60, body)


def test_3_limits_demonstration():
    def body():
        forest = materialize(make_forest(2))
        assert all(r.satisfied for r in check_all(forest, tree_pattern_axioms(True)))
        report = validate_structure(forest)
        assert not report.is_tree and report.root_count == 2
        cycle = materialize(make_cycle(3))
        assert all(r.satisfied for r in check_all(cycle, tree_pattern_axioms(False)))
        axioms = tree_pattern_axioms(True)
        violated = [r for r in check_all(cycle, axioms) if not r.satisfied]
        assert sorted(axioms.get(r.axiom_id).role for r in violated) == ["hasAncestor", "hasDescendant"]
        for r in violated:
            assert all(a == b for a, b in r.witnesses) and r.witnesses
        assert not validate_structure(cycle).is_tree
    judge(3, "forest passes all 28 axioms but has 2 roots; cycle breaks only closure irreflexivity", 1, body)


def test_4_n_bounded_siblings():
    def body():
        for n in (2, 3, 5):
            for seed in range(50):
                bare = _bare(random_tree(seed, 5 + seed % 40, n))
                by_chain = materialize(bare, n_bound=n, derive_siblings_by_rule=False)
                assert by_chain.role("hasSibling") == materialize(bare).role("hasSibling"), (n, seed)
            raised = 0
            for seed in range(20):
                tree = random_tree(500 + seed, 30, n + 2)
                if validate_structure(tree).arity > n:
                    with pytest.raises(NBoundExceeded):
                        materialize(tree, n_bound=n)
                    raised += 1
                else:
                    materialize(tree, n_bound=n)
            assert raised > 0
    judge(4, "n in {2,3,5}: chain-derived siblings equal rule-derived; overfull nodes rejected", 30, body)


def test_5_axiom_counts():
    def body():
        def statements(axioms):
            return len(axiom_statements(export_functional(axioms)))
        assert len(tree_pattern_axioms(True)) == statements(tree_pattern_axioms(True)) == 28
        assert len(list_pattern_axioms(True)) == statements(list_pattern_axioms(True)) == 11
        assert len(sequence_pattern_axioms()) == statements(sequence_pattern_axioms()) == 6
        assert statements(n_bounded_axioms(2)) == 11
        for n in range(1, 9):
            expected = 5 + 2 * n + n * (n - 1)
            assert len(n_bounded_axioms(n)) == statements(n_bounded_axioms(n)) == expected, n
    judge(5, "axiom set sizes: tree 28, list 11, sequence 6, n-bounded 5+2n+n(n-1)", 1, body)


MALFORMED_NEWICK = [
    ("((a,b;", UnbalancedParentheses),
    ("(a,b));", UnbalancedParentheses),
    ("(a,,b)c;", EmptySubtree),
    ("(a,a)r;", DuplicateLabel),
    ("(a,b)r;x", TrailingInput),
    ("(_x,b)r;", ReservedLabel),
    ("(a,b)r", NewickSyntaxError),
]
MALFORMED_TURTLE = [
    ("@prefix : <http://x/#> .\n:a :hasChild :b", TurtleSyntaxError),
    ("@prefix : <http://x/#> .\n:a :hasFriend :b .", UnknownTerm),
    ('@prefix : <http://x/#> .\n:a :hasOutDegree "2.5" .', NonIntegerOutDegree),
]


def test_6_round_trips():
    def body():
        trees = [example_tree()] + [random_tree(s, 1 + s * 7 % 120, 1 + s % 4) for s in range(60)]
        for tree in trees:
            assert parse_newick(write_newick(tree)) == tree
            assert parse_abox_turtle(export_abox_turtle(tree)) == tree
        for text, error in MALFORMED_NEWICK:
            with pytest.raises(error) as info:
                parse_newick(text)
            assert 0 <= info.value.offset <= len(text.encode())
        for text, error in MALFORMED_TURTLE:
            with pytest.raises(error):
                parse_abox_turtle(text)
    judge(6, "Newick and Turtle round trips are identities; malformed input gives typed errors", 10, body)


CLI_RUNS = [
    ["gen", "--seed", "42", "--size", "60", "--branching", "3"],
    ["gen", "--seed", "42", "--size", "60", "--branching", "3", "--to", "newick"],
    ["materialize", "--input", "-", "--n-bound", "3"],
    ["export", "tbox", "--axioms", "tree+nbounded", "--n", "3"],
    ["export", "abox", "--input", "-", "--format", "json-lines"],
]


def test_7_determinism():
    def body():
        stdin = write_newick(random_tree(42, 60, 3))
        for argv in CLI_RUNS:
            outputs = {
                subprocess.run([sys.executable, "-m", "treeodp", *argv], input=stdin.encode(),
                               capture_output=True, check=True).stdout
                for _ in range(2)
            }
            assert len(outputs) == 1, argv
        assert export_functional(tree_pattern_axioms(), ExportOptions()) == \
            export_functional(tree_pattern_axioms(), ExportOptions())
    judge(7, "gen/materialize/export output is byte-identical across runs", 5, body)


def test_8_idempotence():
    def body():
        inputs = [example_tree(), make_forest(2), make_cycle(3), make_cycle(2)]
        inputs += [random_tree(s, 1 + s * 11 % 150, 1 + s % 4) for s in range(40)]
        for abox in inputs:
            once = materialize(abox)
            assert diff_interpretations(once, materialize(once)).is_empty()
        for n in (2, 3):
            once = materialize(random_tree(9, 80, n), n_bound=n)
            assert diff_interpretations(once, materialize(once, n_bound=n)).is_empty()
    judge(8, "re-materializing a materialized interpretation adds nothing", 10, body)
