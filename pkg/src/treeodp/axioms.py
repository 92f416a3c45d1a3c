"""Axiom sets of the sequence, tree, list and n-bounded tree patterns, plus a
finite model checker.

Axioms carry stable ids (``T01``.., ``L01``.., ``S01``.., ``B01``..). Transitivity
is normalized to a two-step role chain; the original ``TransitiveProperty``
form is remembered only for serialization.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Sequence

from . import core
from .core import (
    FIRST_LIST_ITEM, HAS_ANCESTOR, HAS_CHILD, HAS_DESCENDANT, HAS_NEXT, HAS_PARENT,
    HAS_SIBLING, HAS_SUCCESSOR, LAST_LIST_ITEM, LEAF_NODE, LIST_ITEM, N_BOUNDED_TREE_NODE,
    ROOT_NODE, TREE_NODE, Interpretation, child_concept, self_role,
)
from .errors import UnknownTerm
from .expressions import (
    BOTTOM, NON_NEGATIVE_INTEGER, TOP, AtomicConcept, ClassExpression, DataAll, DataExact,
    DegreeAtLeast, DegreeDatatype, DegreeValue, ExactCard, Exists, Forall, Inverse, MaxCard,
    Not, SelfRestriction, check_terms, conj, disj, extension, ill_typed_literals,
)
from .materialize import compose

DEFAULT_MAX_WITNESSES = 10


# -- axiom kinds ---------------------------------------------------------------

@dataclass(frozen=True)
class Axiom:
    id: str

    kind = "axiom"

    def class_expressions(self) -> tuple[ClassExpression, ...]:
        return ()

    def role_names(self) -> tuple[str, ...]:
        return ()


@dataclass(frozen=True)
class SubClassOf(Axiom):
    sub: ClassExpression
    sup: ClassExpression

    kind = "subClassOf"

    def class_expressions(self):
        return (self.sub, self.sup)


@dataclass(frozen=True)
class EquivalentClasses(Axiom):
    left: ClassExpression
    right: ClassExpression

    kind = "equivalentClasses"

    def class_expressions(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class InverseRoles(Axiom):
    """``role ≡ other⁻``"""
    role: str
    other: str

    kind = "inverseRoles"

    def role_names(self):
        return (self.role, self.other)


@dataclass(frozen=True)
class SubRole(Axiom):
    sub: str
    sup: str

    kind = "subRole"

    def role_names(self):
        return (self.sub, self.sup)


@dataclass(frozen=True)
class RoleChain(Axiom):
    """``chain[0] ∘ chain[1] ∘ ... ⊑ sup``.

    ``distinct_ends`` restricts the chain to pairs with different end points
    (the sibling rule ``hasParent(x,y) ∧ hasChild(y,z) ∧ x≠z → hasSibling(x,z)``).
    """
    chain: tuple[str, ...]
    sup: str
    transitive_form: bool = False
    distinct_ends: bool = False

    kind = "roleChain"

    def role_names(self):
        return (*self.chain, self.sup)


@dataclass(frozen=True)
class Irreflexive(Axiom):
    role: str

    kind = "irreflexive"

    def role_names(self):
        return (self.role,)


@dataclass(frozen=True)
class SymmetricRole(Axiom):
    """``role ≡ role⁻``"""
    role: str

    kind = "symmetricDefn"

    def role_names(self):
        return (self.role,)


def _id_key(axiom_id: str) -> tuple[str, int]:
    m = re.match(r"([A-Za-z]*)(\d+)\Z", axiom_id)
    return (m.group(1), int(m.group(2))) if m else (axiom_id, 0)


class AxiomSet(Sequence):
    """An ordered, id-unique collection of axioms."""

    def __init__(self, name: str, axioms: Iterable[Axiom]):
        self.name = name
        self.axioms = tuple(sorted(axioms, key=lambda a: _id_key(a.id)))
        ids = [a.id for a in self.axioms]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate axiom ids in {name}")

    def __getitem__(self, i):
        return self.axioms[i]

    def __len__(self):
        return len(self.axioms)

    def __iter__(self) -> Iterator[Axiom]:
        return iter(self.axioms)

    def __eq__(self, other):
        return isinstance(other, AxiomSet) and self.axioms == other.axioms

    def __repr__(self):
        return f"AxiomSet({self.name!r}, {len(self)} axioms)"

    def __add__(self, other: "AxiomSet") -> "AxiomSet":
        return AxiomSet(f"{self.name}+{other.name}", self.axioms + other.axioms)

    @property
    def ids(self) -> list[str]:
        return [a.id for a in self.axioms]

    def get(self, axiom_id: str) -> Axiom:
        for a in self.axioms:
            if a.id == axiom_id:
                return a
        raise KeyError(axiom_id)

    def without_irreflexive(self) -> "AxiomSet":
        return AxiomSet(self.name, (a for a in self.axioms if not isinstance(a, Irreflexive)))


def _c(name: str) -> AtomicConcept:
    return AtomicConcept(name)


# -- the pattern axiom sets ----------------------------------------------------

def tree_pattern_axioms(include_irreflexive: bool = True) -> AxiomSet:
    """Tree pattern axioms T01-T28.

    T01-T25 are the listed axioms of the pattern in order. T26-T28 add the
    consequences named alongside it: ``hasParent ⊑ hasAncestor``, the sibling
    rule with distinct end points, and transitivity of ``hasAncestor``.
    Without irreflexivity the five ``Irreflexive`` declarations are dropped
    and the remaining ids are kept.
    """
    tree, leaf, root = _c(TREE_NODE), _c(LEAF_NODE), _c(ROOT_NODE)
    not_leaf = conj(tree, Not(leaf))
    axioms = [
        SubClassOf("T01", leaf, tree),
        SubClassOf("T02", root, tree),
        SubClassOf("T03", tree, DataAll(DegreeDatatype())),
        SubClassOf("T04", tree, DataExact(1, DegreeDatatype())),
        EquivalentClasses("T05", leaf, conj(tree, DataAll(DegreeValue(0)))),
        EquivalentClasses("T06", not_leaf, conj(tree, DataAll(DegreeAtLeast(1)))),
        InverseRoles("T07", HAS_CHILD, HAS_PARENT),
        InverseRoles("T08", HAS_DESCENDANT, HAS_ANCESTOR),
        SubRole("T09", HAS_CHILD, HAS_DESCENDANT),
        RoleChain("T10", (HAS_DESCENDANT, HAS_DESCENDANT), HAS_DESCENDANT),
        SubClassOf("T11", tree, Forall(HAS_CHILD, tree)),
        EquivalentClasses("T12", not_leaf, conj(tree, Exists(HAS_CHILD, tree))),
        SubClassOf("T13", tree, Forall(HAS_DESCENDANT, tree)),
        SubClassOf("T14", tree, Forall(HAS_PARENT, tree)),
        SubClassOf("T15", tree, Forall(HAS_SIBLING, tree)),
        EquivalentClasses("T16", conj(tree, Not(root)), conj(tree, ExactCard(1, HAS_PARENT, TOP))),
        SubClassOf("T17", tree, Forall(HAS_ANCESTOR, tree)),
        EquivalentClasses("T18", root, conj(tree, Not(Exists(HAS_PARENT, TOP)))),
        EquivalentClasses("T19", leaf, conj(tree, Not(Exists(HAS_CHILD, TOP)))),
        Irreflexive("T20", HAS_CHILD),
        Irreflexive("T21", HAS_PARENT),
        Irreflexive("T22", HAS_DESCENDANT),
        Irreflexive("T23", HAS_ANCESTOR),
        SymmetricRole("T24", HAS_SIBLING),
        Irreflexive("T25", HAS_SIBLING),
        SubRole("T26", HAS_PARENT, HAS_ANCESTOR),
        RoleChain("T27", (HAS_PARENT, HAS_CHILD), HAS_SIBLING, distinct_ends=True),
        RoleChain("T28", (HAS_ANCESTOR, HAS_ANCESTOR), HAS_ANCESTOR),
    ]
    out = AxiomSet("tree", axioms)
    return out if include_irreflexive else out.without_irreflexive()


def list_pattern_axioms(include_irreflexive: bool = True) -> AxiomSet:
    item, first, last = _c(LIST_ITEM), _c(FIRST_LIST_ITEM), _c(LAST_LIST_ITEM)
    prev = Inverse(HAS_NEXT)
    axioms = [
        SubClassOf("L01", first, item),
        SubClassOf("L02", last, item),
        SubClassOf("L03", item, Forall(HAS_NEXT, item)),
        SubClassOf("L04", item, Forall(prev, item)),
        EquivalentClasses("L05", conj(item, Not(last)), conj(item, ExactCard(1, HAS_NEXT, item))),
        EquivalentClasses("L06", conj(item, Not(first)), conj(item, ExactCard(1, prev, item))),
        EquivalentClasses("L07", first, conj(item, Not(Exists(prev, TOP)))),
        EquivalentClasses("L08", last, conj(item, Not(Exists(HAS_NEXT, TOP)))),
        SubRole("L09", HAS_NEXT, HAS_SUCCESSOR),
        RoleChain("L10", (HAS_NEXT, HAS_SUCCESSOR), HAS_SUCCESSOR),
        Irreflexive("L11", HAS_SUCCESSOR),
    ]
    out = AxiomSet("list", axioms)
    return out if include_irreflexive else out.without_irreflexive()


def sequence_pattern_axioms() -> AxiomSet:
    return AxiomSet("sequence", [
        SubRole("S01", core.DIRECTLY_FOLLOWS, core.FOLLOWS),
        InverseRoles("S02", core.DIRECTLY_FOLLOWS, core.DIRECTLY_PRECEDES),
        SubRole("S03", core.DIRECTLY_PRECEDES, core.PRECEDES),
        InverseRoles("S04", core.PRECEDES, core.FOLLOWS),
        RoleChain("S05", (core.FOLLOWS, core.FOLLOWS), core.FOLLOWS, transitive_form=True),
        RoleChain("S06", (core.PRECEDES, core.PRECEDES), core.PRECEDES, transitive_form=True),
    ])


def n_bounded_axioms(n: int) -> AxiomSet:
    """Axioms to add to the tree pattern for trees with at most ``n`` children per node.

    ``5 + 2n + n(n-1)`` axioms: three subsumptions, the ``Child_1 ⊔ ... ⊔ Child_n``
    disjunction, pairwise disjointness, at most one child per ``Child_i``, the
    overall ``≤n hasChild`` bound, the ``∃R_i.Self`` rolifications and the
    sibling chains for ``i < j``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    nb = _c(N_BOUNDED_TREE_NODE)
    kids = [_c(child_concept(i)) for i in range(1, n + 1)]
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    axioms: list[Axiom] = [
        SubClassOf("", nb, _c(TREE_NODE)),
        SubClassOf("", nb, Forall(HAS_ANCESTOR, nb)),
        SubClassOf("", nb, Forall(HAS_DESCENDANT, nb)),
        SubClassOf("", nb, disj(*kids)),
    ]
    axioms += [SubClassOf("", conj(kids[i - 1], kids[j - 1]), BOTTOM) for i, j in pairs]
    axioms += [SubClassOf("", nb, MaxCard(1, HAS_CHILD, k)) for k in kids]
    axioms.append(SubClassOf("", nb, MaxCard(n, HAS_CHILD, nb)))
    axioms += [SubClassOf("", kids[i - 1], SelfRestriction(self_role(i))) for i in range(1, n + 1)]
    axioms += [RoleChain("", (self_role(i), HAS_PARENT, HAS_CHILD, self_role(j)), HAS_SIBLING)
               for i, j in pairs]
    width = max(2, len(str(len(axioms))))
    numbered = [replace(a, id=f"B{k:0{width}d}") for k, a in enumerate(axioms, start=1)]
    return AxiomSet(f"nbounded-{n}", numbered)


def axiom_set(name: str, *, include_irreflexive: bool = True, n: int | None = None) -> AxiomSet:
    """Look up a set by name: ``tree``, ``list``, ``sequence``, ``nbounded`` or ``tree+nbounded``."""
    if name == "tree":
        return tree_pattern_axioms(include_irreflexive)
    if name == "list":
        return list_pattern_axioms(include_irreflexive)
    if name == "sequence":
        return sequence_pattern_axioms()
    if name in ("nbounded", "tree+nbounded"):
        if n is None:
            raise ValueError(f"axiom set {name!r} needs n")
        nb = n_bounded_axioms(n)
        if name == "nbounded":
            return nb
        return tree_pattern_axioms(include_irreflexive) + nb
    raise ValueError(f"unknown axiom set {name!r}")


# -- OWL DL profile ----------------------------------------------------------

def non_simple_roles(axioms: Iterable[Axiom]) -> set[str]:
    """Roles implied by a composition (directly or via sub-roles/inverses)."""
    axioms = list(axioms)
    out = {a.sup for a in axioms
           if isinstance(a, RoleChain) and len(a.chain) >= 2 and not a.distinct_ends}
    changed = True
    while changed:
        changed = False
        for a in axioms:
            new: set[str] = set()
            if isinstance(a, SubRole) and a.sub in out:
                new.add(a.sup)
            elif isinstance(a, InverseRoles) and (a.role in out or a.other in out):
                new |= {a.role, a.other}
            if not new <= out:
                out |= new
                changed = True
    return out


def outside_owl_dl(axioms: Iterable[Axiom]) -> list[str]:
    """Ids of irreflexivity declarations on non-simple roles."""
    axioms = list(axioms)
    bad = non_simple_roles(axioms)
    return [a.id for a in axioms if isinstance(a, Irreflexive) and a.role in bad]


# -- model checking ----------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    axiom_id: str
    satisfied: bool
    witnesses: tuple = ()
    total: int = 0
    warning: str | None = None

    def as_dict(self) -> dict:
        d = {"axiom": self.axiom_id, "satisfied": self.satisfied,
             "witnesses": [list(w) if isinstance(w, tuple) else w for w in self.witnesses],
             "total": self.total}
        if self.warning:
            d["warning"] = self.warning
        return d


def _validate_terms(axiom: Axiom) -> None:
    for r in axiom.role_names():
        if not core.is_role(r):
            raise UnknownTerm(r)
    for e in axiom.class_expressions():
        check_terms(e)


def _violations(interp: Interpretation, axiom: Axiom, datatype: str) -> list:
    if isinstance(axiom, SubClassOf):
        return sorted(extension(interp, axiom.sub, datatype) - extension(interp, axiom.sup, datatype))
    if isinstance(axiom, EquivalentClasses):
        return sorted(extension(interp, axiom.left, datatype) ^ extension(interp, axiom.right, datatype))
    if isinstance(axiom, InverseRoles):
        r = interp.role(axiom.role)
        s_inv = {(o, s) for s, o in interp.role(axiom.other)}
        return sorted(r ^ s_inv)
    if isinstance(axiom, SubRole):
        return sorted(interp.role(axiom.sub) - interp.role(axiom.sup))
    if isinstance(axiom, RoleChain):
        pairs = compose(*(interp.role(r) for r in axiom.chain))
        if axiom.distinct_ends:
            pairs = {(x, z) for x, z in pairs if x != z}
        return sorted(pairs - interp.role(axiom.sup))
    if isinstance(axiom, Irreflexive):
        return sorted((x, y) for x, y in interp.role(axiom.role) if x == y)
    if isinstance(axiom, SymmetricRole):
        r = interp.role(axiom.role)
        return sorted((x, y) for x, y in r if (y, x) not in r)
    raise TypeError(f"unsupported axiom {axiom!r}")


def check_axiom(interp: Interpretation, axiom: Axiom, *,
                max_witnesses: int | None = DEFAULT_MAX_WITNESSES,
                datatype: str = NON_NEGATIVE_INTEGER) -> CheckResult:
    """Evaluate ``axiom`` on the finite interpretation.

    Witnesses are the violating nodes (class axioms) or pairs (role axioms),
    truncated to ``max_witnesses`` (``None`` for all); ``total`` is the full
    count. An axiom whose literal lies outside ``datatype`` (``0`` typed as
    ``positiveInteger``) is reported satisfied, with a warning.
    """
    _validate_terms(axiom)
    bad_literals = sorted({v for e in axiom.class_expressions() for v in ill_typed_literals(e, datatype)})
    if bad_literals:
        return CheckResult(axiom.id, True, warning=(
            f"literal(s) {bad_literals} outside the value space of xsd:{datatype}; "
            "axiom treated as vacuously satisfied"))
    found = _violations(interp, axiom, datatype)
    shown = found if max_witnesses is None else found[:max_witnesses]
    return CheckResult(axiom.id, not found, tuple(shown), len(found))


def check_all(interp: Interpretation, axioms: Iterable[Axiom], **kwargs) -> list[CheckResult]:
    """One result per axiom, in axiom-id order."""
    ordered = sorted(axioms, key=lambda a: _id_key(a.id))
    return [check_axiom(interp, a, **kwargs) for a in ordered]


def summarize(results: Sequence[CheckResult]) -> str:
    ok = sum(r.satisfied for r in results)
    return f"{ok}/{len(results)} satisfied"


def results_to_jsonl(results: Iterable[CheckResult]) -> str:
    return "".join(json.dumps(r.as_dict(), sort_keys=True) + "\n" for r in results)
