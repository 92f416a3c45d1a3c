"""Tree ontology design pattern: ABoxes, materialization, axiom checking, queries and export."""

__version__ = "0.1.0"

from .axioms import (
    Axiom, AxiomSet, CheckResult, EquivalentClasses, InverseRoles, Irreflexive, RoleChain,
    SubClassOf, SubRole, SymmetricRole, axiom_set, check_all, check_axiom, list_pattern_axioms,
    n_bounded_axioms, non_simple_roles, outside_owl_dl, results_to_jsonl,
    sequence_pattern_axioms, summarize, tree_pattern_axioms,
)
from .core import (
    Interpretation, StructuralReport, TreeAbox, Vocabulary, abox_to_interpretation,
    describe_tree, example_tree, make_cycle, make_forest, random_tree, validate_structure,
)
from .errors import *  # noqa: F401,F403
from .export import ExportOptions, export_abox_turtle, export_functional
from .expressions import parse_expression, to_sexpr
from .ingest import parse_abox_turtle, parse_newick, write_newick
from .materialize import FactDelta, MaterializeOptions, diff_interpretations, materialize
from .query import (
    DescendantAnswer, QueryResult, cq1_roots, cq2_ancestors, cq3_leaves, cq4_descendants,
    cq5_leaf_descendants, cq6_is_descendant, cq7_common_ancestors, cq8_mrca,
    cq9_exclusive_ancestor, evaluate, oracle_ancestors, oracle_exclusive, oracle_mrca, run_cq,
)
