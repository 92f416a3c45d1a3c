"""Deterministic serialization of axiom sets (OWL 2 functional syntax) and ABoxes (Turtle).

Output is UTF-8 text with LF line endings. One axiom statement per line,
preceded by a ``# <id>`` comment line, in axiom-id order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from urllib.parse import quote, urlsplit

from .axioms import (
    Axiom, AxiomSet, EquivalentClasses, InverseRoles, Irreflexive, RoleChain, SubClassOf,
    SubRole, SymmetricRole, outside_owl_dl,
)
from .core import HAS_OUT_DEGREE, TreeAbox
from .expressions import (
    NON_NEGATIVE_INTEGER, POSITIVE_INTEGER, And, AtomicConcept, Bottom, ClassExpression,
    DataAll, DataExact, DegreeAtLeast, DegreeDatatype, DegreeValue, ExactCard, Exists, Forall,
    Inverse, MaxCard, MinCard, Nominal, Not, Or, OutDegreeAtLeast, OutDegreeIs, SelfRestriction,
    Top, ill_typed_literals,
)
from .ingest import RDF_NS, XSD_NS

OWL_NS = "http://www.w3.org/2002/07/owl#"
DEFAULT_NAMESPACE = "http://example.org/tree-pattern#"
POSITIVE_INTEGER_MODE = "paperFaithfulPositiveInteger"
DATATYPE_MODES = {NON_NEGATIVE_INTEGER: NON_NEGATIVE_INTEGER, POSITIVE_INTEGER_MODE: POSITIVE_INTEGER}


@dataclass(frozen=True)
class ExportOptions:
    namespace: str = DEFAULT_NAMESPACE
    out_degree_datatype: str = NON_NEGATIVE_INTEGER
    include_irreflexive: bool = True

    def __post_init__(self):
        parts = urlsplit(self.namespace)
        if not (parts.scheme and (parts.netloc or parts.path)) or self.namespace[-1] not in "/#" \
                or re.search(r"[\s<>\"{}|\\^`]", self.namespace):
            raise ValueError(f"namespace must be an absolute IRI ending in '/' or '#': {self.namespace!r}")
        if self.out_degree_datatype not in DATATYPE_MODES:
            raise ValueError(f"out_degree_datatype must be one of {sorted(DATATYPE_MODES)}")

    @property
    def datatype(self) -> str:
        """The XSD datatype used for out-degree values."""
        return DATATYPE_MODES[self.out_degree_datatype]


# -- functional syntax ---------------------------------------------------------

class _FunctionalWriter:
    def __init__(self, opts: ExportOptions):
        self.dt = f"xsd:{opts.datatype}"

    def role(self, r) -> str:
        if isinstance(r, Inverse):
            return f"ObjectInverseOf(:{r.name})"
        return f":{r}"

    def literal(self, v: int) -> str:
        return f'"{v}"^^{self.dt}'

    def data_range(self, rng) -> str:
        if isinstance(rng, DegreeDatatype):
            return self.dt
        if isinstance(rng, DegreeValue):
            return f"DataOneOf({self.literal(rng.value)})"
        if isinstance(rng, DegreeAtLeast):
            return f"DatatypeRestriction({self.dt} xsd:minInclusive {self.literal(rng.minimum)})"
        raise TypeError(rng)

    def cls(self, e: ClassExpression) -> str:
        if isinstance(e, Top):
            return "owl:Thing"
        if isinstance(e, Bottom):
            return "owl:Nothing"
        if isinstance(e, AtomicConcept):
            return f":{e.name}"
        if isinstance(e, Nominal):
            return f"ObjectOneOf(:{e.node})"
        if isinstance(e, Not):
            return f"ObjectComplementOf({self.cls(e.operand)})"
        if isinstance(e, And):
            return f"ObjectIntersectionOf({' '.join(self.cls(x) for x in _flatten(e, And))})"
        if isinstance(e, Or):
            return f"ObjectUnionOf({' '.join(self.cls(x) for x in _flatten(e, Or))})"
        if isinstance(e, Exists):
            return f"ObjectSomeValuesFrom({self.role(e.role)} {self.cls(e.filler)})"
        if isinstance(e, Forall):
            return f"ObjectAllValuesFrom({self.role(e.role)} {self.cls(e.filler)})"
        if isinstance(e, (MinCard, MaxCard, ExactCard)):
            name = {MinCard: "Min", MaxCard: "Max", ExactCard: "Exact"}[type(e)]
            return f"Object{name}Cardinality({e.k} {self.role(e.role)} {self.cls(e.filler)})"
        if isinstance(e, SelfRestriction):
            return f"ObjectHasSelf({self.role(e.role)})"
        if isinstance(e, OutDegreeIs):
            return f"DataHasValue(:{HAS_OUT_DEGREE} {self.literal(e.k)})"
        if isinstance(e, OutDegreeAtLeast):
            return f"DataSomeValuesFrom(:{HAS_OUT_DEGREE} {self.data_range(DegreeAtLeast(e.k))})"
        if isinstance(e, DataAll):
            return f"DataAllValuesFrom(:{HAS_OUT_DEGREE} {self.data_range(e.range)})"
        if isinstance(e, DataExact):
            return f"DataExactCardinality({e.k} :{HAS_OUT_DEGREE} {self.data_range(e.range)})"
        raise TypeError(f"cannot serialize {e!r}")

    def axiom(self, a: Axiom) -> str:
        if isinstance(a, SubClassOf):
            return f"SubClassOf({self.cls(a.sub)} {self.cls(a.sup)})"
        if isinstance(a, EquivalentClasses):
            return f"EquivalentClasses({self.cls(a.left)} {self.cls(a.right)})"
        if isinstance(a, InverseRoles):
            return f"InverseObjectProperties(:{a.role} :{a.other})"
        if isinstance(a, SubRole):
            return f"SubObjectPropertyOf(:{a.sub} :{a.sup})"
        if isinstance(a, RoleChain):
            if a.transitive_form:
                return f"TransitiveObjectProperty(:{a.sup})"
            if a.distinct_ends:
                return _distinct_chain_rule(a)
            chain = " ".join(f":{r}" for r in a.chain)
            return f"SubObjectPropertyOf(ObjectPropertyChain({chain}) :{a.sup})"
        if isinstance(a, Irreflexive):
            return f"IrreflexiveObjectProperty(:{a.role})"
        if isinstance(a, SymmetricRole):
            return f"SymmetricObjectProperty(:{a.role})"
        raise TypeError(f"cannot serialize {a!r}")


def _flatten(e, cls) -> list:
    if isinstance(e, cls):
        return _flatten(e.left, cls) + _flatten(e.right, cls)
    return [e]


def _distinct_chain_rule(a: RoleChain) -> str:
    """A chain with distinct end points, as a DL-safe rule (OWL cannot state x≠z in a chain)."""
    var = [f"Variable(<urn:swrl:var#v{i}>)" for i in range(len(a.chain) + 1)]
    body = [f"ObjectPropertyAtom(:{r} {var[i]} {var[i + 1]})" for i, r in enumerate(a.chain)]
    body.append(f"DifferentIndividualsAtom({var[0]} {var[-1]})")
    head = f"ObjectPropertyAtom(:{a.sup} {var[0]} {var[-1]})"
    return f"DLSafeRule(Body({' '.join(body)}) Head({head}))"


def _ontology_iri(namespace: str) -> str:
    return namespace[:-1] if namespace.endswith("#") else namespace.rstrip("/")


def export_functional(axioms: AxiomSet, opts: ExportOptions | None = None) -> str:
    opts = opts or ExportOptions()
    selected = list(axioms) if opts.include_irreflexive else list(axioms.without_irreflexive())
    writer = _FunctionalWriter(opts)
    lines = [
        f"Prefix(:=<{opts.namespace}>)",
        f"Prefix(owl:=<{OWL_NS}>)",
        f"Prefix(rdf:=<{RDF_NS}>)",
        f"Prefix(xsd:=<{XSD_NS}>)",
        "",
        f"Ontology(<{_ontology_iri(opts.namespace)}/{axioms.name}>",
    ]
    profile = outside_owl_dl(selected)
    if profile:
        lines.append(f"# OWL DL profile: {', '.join(profile)} declare irreflexivity for non-simple "
                     "roles; drop them to stay within OWL DL.")
    for a in selected:
        lines.append(f"# {a.id}")
        bad = sorted({v for e in a.class_expressions() for v in ill_typed_literals(e, opts.datatype)})
        if bad:
            lines.append(f"# warning: literal(s) {bad} lie outside the value space of xsd:{opts.datatype}")
        lines.append(writer.axiom(a))
    lines.append(")")
    return "\n".join(lines) + "\n"


_STATEMENT = re.compile(r"^[A-Z][A-Za-z]*\(")


def axiom_statements(text: str) -> list[str]:
    """Axiom statement lines of an exported ontology document (excludes prefixes and comments)."""
    out, inside = [], False
    for line in text.splitlines():
        if line.startswith("Ontology("):
            inside = True
            continue
        if inside and line != ")" and not line.startswith("#") and _STATEMENT.match(line):
            out.append(line)
    return out


# -- Turtle --------------------------------------------------------------------

_SAFE_LOCAL = re.compile(r"[A-Za-z0-9_](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?\Z")


def _term(name: str, namespace: str) -> str:
    if _SAFE_LOCAL.match(name):
        return f":{name}"
    return f"<{namespace}{quote(name, safe='')}>"


def export_abox_turtle(abox: TreeAbox, opts: ExportOptions | None = None) -> str:
    """Triples sorted by subject, predicate, object; one triple per line."""
    opts = opts or ExportOptions()
    ns = opts.namespace
    header = [f"@prefix : <{ns}> .", f"@prefix rdf: <{RDF_NS}> .", f"@prefix xsd: <{XSD_NS}> ."]
    triples = [(n, "rdf:type", c) for n, c in abox.concept_assertions]
    triples += [(s, r, o) for r, s, o in abox.role_assertions]
    rows = sorted((s, p, o) for s, p, o in triples)
    data = sorted((n, p, v) for n, p, v in abox.data_assertions)
    body: list[tuple] = []
    for s, p, o in rows:
        pred = p if p == "rdf:type" else _term(p, ns)
        body.append(((s, p, 0, o), f"{_term(s, ns)} {pred} {_term(o, ns)} ."))
    for n, p, v in data:
        body.append(((n, p, 1, v), f'{_term(n, ns)} {_term(p, ns)} "{v}"^^xsd:{opts.datatype} .'))
    body.sort(key=lambda item: item[0])
    lines = header
    if opts.datatype == POSITIVE_INTEGER and any(v == 0 for _, _, v in abox.data_assertions):
        lines.append("# warning: out-degree 0 lies outside the value space of xsd:positiveInteger")
    if body:
        lines.append("")
        lines += [line for _, line in body]
    return "\n".join(lines) + "\n"
