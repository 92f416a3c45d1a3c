"""Description-logic class expressions and their closed-world evaluation.

Expressions are frozen dataclasses, so they hash and can be used as memo keys.
Evaluation results are cached on the interpretation, which keeps repeated
competency queries over the same tree cheap (the nominal sub-expressions
``{x} ⊔ ∃hasDescendant.{x}`` recur across node pairs).

A small prefix syntax is provided for the command line::

    (and LeafNode (some hasAncestor {b}))
    (some (inv hasChild) (nominal a))
    (exactly 1 hasParent top)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .core import Interpretation, is_concept, is_role
from .errors import ExpressionSyntaxError, UnknownNode, UnknownTerm

NON_NEGATIVE_INTEGER = "nonNegativeInteger"
POSITIVE_INTEGER = "positiveInteger"
DATATYPES = (NON_NEGATIVE_INTEGER, POSITIVE_INTEGER)


# -- roles ---------------------------------------------------------------------

@dataclass(frozen=True)
class Inverse:
    name: str

    def __str__(self):
        return f"(inv {self.name})"


RoleExpr = Union[str, Inverse]


def role_name(role: RoleExpr) -> str:
    return role.name if isinstance(role, Inverse) else role


def inverse(role: RoleExpr) -> RoleExpr:
    return role.name if isinstance(role, Inverse) else Inverse(role)


# -- data ranges over the out-degree datatype ----------------------------------

@dataclass(frozen=True)
class DegreeDatatype:
    """The configured out-degree datatype itself."""


@dataclass(frozen=True)
class DegreeValue:
    """A single literal typed with the out-degree datatype."""
    value: int


@dataclass(frozen=True)
class DegreeAtLeast:
    """The out-degree datatype restricted by a ``minInclusive`` facet."""
    minimum: int


DataRange = Union[DegreeDatatype, DegreeValue, DegreeAtLeast]


def datatype_contains(datatype: str, value: int) -> bool:
    if datatype == NON_NEGATIVE_INTEGER:
        return value >= 0
    if datatype == POSITIVE_INTEGER:
        return value >= 1
    raise ValueError(f"unsupported datatype {datatype!r}")


def range_contains(rng: DataRange, value: int, datatype: str) -> bool:
    if not datatype_contains(datatype, value):
        return False
    if isinstance(rng, DegreeDatatype):
        return True
    if isinstance(rng, DegreeValue):
        return value == rng.value
    return value >= rng.minimum


# -- class expressions ---------------------------------------------------------

class ClassExpression:
    """Base class; subclasses are frozen dataclasses."""

    def __str__(self):
        return to_sexpr(self)

    def __repr__(self):
        return f"<{type(self).__name__} {to_sexpr(self)}>"

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True, repr=False)
class Top(ClassExpression):
    pass


@dataclass(frozen=True, repr=False)
class Bottom(ClassExpression):
    pass


@dataclass(frozen=True, repr=False)
class AtomicConcept(ClassExpression):
    name: str


@dataclass(frozen=True, repr=False)
class Nominal(ClassExpression):
    node: str


@dataclass(frozen=True, repr=False)
class Not(ClassExpression):
    operand: ClassExpression


@dataclass(frozen=True, repr=False)
class And(ClassExpression):
    left: ClassExpression
    right: ClassExpression


@dataclass(frozen=True, repr=False)
class Or(ClassExpression):
    left: ClassExpression
    right: ClassExpression


@dataclass(frozen=True, repr=False)
class Exists(ClassExpression):
    role: RoleExpr
    filler: ClassExpression


@dataclass(frozen=True, repr=False)
class Forall(ClassExpression):
    role: RoleExpr
    filler: ClassExpression


@dataclass(frozen=True, repr=False)
class MinCard(ClassExpression):
    k: int
    role: RoleExpr
    filler: ClassExpression


@dataclass(frozen=True, repr=False)
class MaxCard(ClassExpression):
    k: int
    role: RoleExpr
    filler: ClassExpression


@dataclass(frozen=True, repr=False)
class ExactCard(ClassExpression):
    k: int
    role: RoleExpr
    filler: ClassExpression


@dataclass(frozen=True, repr=False)
class SelfRestriction(ClassExpression):
    role: RoleExpr


@dataclass(frozen=True, repr=False)
class OutDegreeIs(ClassExpression):
    k: int


@dataclass(frozen=True, repr=False)
class OutDegreeAtLeast(ClassExpression):
    k: int


@dataclass(frozen=True, repr=False)
class DataAll(ClassExpression):
    """``∀hasOutDegree.range``"""
    range: DataRange


@dataclass(frozen=True, repr=False)
class DataExact(ClassExpression):
    """``=k hasOutDegree.range``"""
    k: int
    range: DataRange


def _cache_hash(cls):
    # nested frozen dataclasses rehash their whole subtree on every call
    raw = cls.__hash__

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = raw(self)
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__


for _cls in (Top, Bottom, AtomicConcept, Nominal, Not, And, Or, Exists, Forall, MinCard, MaxCard,
             ExactCard, SelfRestriction, OutDegreeIs, OutDegreeAtLeast, DataAll, DataExact):
    _cache_hash(_cls)

TOP = Top()
BOTTOM = Bottom()


def C(name: str) -> AtomicConcept:
    return AtomicConcept(name)


def one_of(node: str) -> Nominal:
    return Nominal(node)


def conj(*parts: ClassExpression) -> ClassExpression:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: ClassExpression) -> ClassExpression:
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def children(expr: ClassExpression) -> tuple[ClassExpression, ...]:
    if isinstance(expr, Not):
        return (expr.operand,)
    if isinstance(expr, (And, Or)):
        return (expr.left, expr.right)
    if isinstance(expr, (Exists, Forall, MinCard, MaxCard, ExactCard)):
        return (expr.filler,)
    return ()


def walk(expr: ClassExpression) -> Iterator[ClassExpression]:
    stack = [expr]
    while stack:
        e = stack.pop()
        yield e
        stack.extend(children(e))


def signature(expr: ClassExpression) -> tuple[set[str], set[str], set[str]]:
    """Concept names, role names and nominals mentioned in ``expr``."""
    concepts, roles, nodes = set(), set(), set()
    for e in walk(expr):
        if isinstance(e, AtomicConcept):
            concepts.add(e.name)
        elif isinstance(e, Nominal):
            nodes.add(e.node)
        elif isinstance(e, (Exists, Forall, MinCard, MaxCard, ExactCard, SelfRestriction)):
            roles.add(role_name(e.role))
    return concepts, roles, nodes


def check_terms(expr: ClassExpression) -> None:
    concepts, roles, _ = signature(expr)
    for c in sorted(concepts):
        if not is_concept(c):
            raise UnknownTerm(c)
    for r in sorted(roles):
        if not is_role(r):
            raise UnknownTerm(r)


def ill_typed_literals(expr: ClassExpression, datatype: str) -> list[int]:
    """Literal values in ``expr`` that fall outside ``datatype``'s value space."""
    bad = []
    for e in walk(expr):
        rng = getattr(e, "range", None)
        if isinstance(rng, DegreeValue) and not datatype_contains(datatype, rng.value):
            bad.append(rng.value)
    return bad


# -- evaluation ----------------------------------------------------------------

def _succ(interp: Interpretation, role: RoleExpr) -> dict[str, set[str]]:
    if isinstance(role, Inverse):
        return interp.predecessors(role.name)
    return interp.successors(role)


def _pred(interp: Interpretation, role: RoleExpr) -> dict[str, set[str]]:
    if isinstance(role, Inverse):
        return interp.successors(role.name)
    return interp.predecessors(role)


def extension(interp: Interpretation, expr: ClassExpression,
              datatype: str = NON_NEGATIVE_INTEGER) -> frozenset[str]:
    """Exact extension of ``expr`` in ``interp`` under closed-world semantics.

    Terms are validated as subexpressions are first computed; a memo hit
    means the subexpression was already checked against this interpretation.
    """
    if datatype not in DATATYPES:
        raise ValueError(f"unsupported datatype {datatype!r}")
    return _ext(interp, expr, datatype)


def _ext(interp: Interpretation, expr: ClassExpression, datatype: str) -> frozenset[str]:
    key = ("ext", expr, datatype)
    memo = interp._memo
    if key in memo:
        return memo[key]
    result = frozenset(_compute(interp, expr, datatype))
    memo[key] = result
    return result


def _count_in(succ: dict, x: str, ext: frozenset) -> int:
    ys = succ.get(x)
    return len(ys & ext) if ys else 0


def _compute(interp: Interpretation, e: ClassExpression, dt: str):
    domain = interp.domain
    if isinstance(e, Top):
        return domain
    if isinstance(e, Bottom):
        return ()
    if isinstance(e, AtomicConcept):
        if not is_concept(e.name):
            raise UnknownTerm(e.name)
        return interp.concept(e.name)
    if isinstance(e, Nominal):
        if e.node not in domain:
            raise UnknownNode(e.node)
        return (e.node,)
    role = getattr(e, "role", None)
    if role is not None and not is_role(role_name(role)):
        raise UnknownTerm(role_name(role))
    if isinstance(e, Not):
        return domain - _ext(interp, e.operand, dt)
    if isinstance(e, And):
        return _ext(interp, e.left, dt) & _ext(interp, e.right, dt)
    if isinstance(e, Or):
        return _ext(interp, e.left, dt) | _ext(interp, e.right, dt)
    if isinstance(e, Exists):
        pred = _pred(interp, e.role)
        out: set[str] = set()
        for y in _ext(interp, e.filler, dt):
            out.update(pred.get(y, ()))
        return out
    if isinstance(e, Forall):
        succ = _succ(interp, e.role)
        filler = _ext(interp, e.filler, dt)
        return {x for x in domain if succ.get(x, set()) <= filler}
    if isinstance(e, (MinCard, MaxCard, ExactCard)):
        succ = _succ(interp, e.role)
        filler = _ext(interp, e.filler, dt)
        counts = {x: _count_in(succ, x, filler) for x in domain}
        if isinstance(e, MinCard):
            return {x for x, k in counts.items() if k >= e.k}
        if isinstance(e, MaxCard):
            return {x for x, k in counts.items() if k <= e.k}
        return {x for x, k in counts.items() if k == e.k}
    if isinstance(e, SelfRestriction):
        succ = _succ(interp, e.role)
        return {x for x, ys in succ.items() if x in ys}
    degrees = interp.out_degree
    if isinstance(e, OutDegreeIs):
        return {x for x, v in degrees.items() if v == e.k}
    if isinstance(e, OutDegreeAtLeast):
        return {x for x, v in degrees.items() if v >= e.k}
    if isinstance(e, DataAll):
        return {x for x in domain if x not in degrees or range_contains(e.range, degrees[x], dt)}
    if isinstance(e, DataExact):
        return {x for x in domain
                if int(x in degrees and range_contains(e.range, degrees[x], dt)) == e.k}
    raise TypeError(f"not a class expression: {e!r}")


# -- prefix syntax -------------------------------------------------------------

def _role_str(role: RoleExpr) -> str:
    return str(role) if isinstance(role, Inverse) else role


def _range_str(rng: DataRange) -> str:
    if isinstance(rng, DegreeDatatype):
        return "degree"
    if isinstance(rng, DegreeValue):
        return f"(value {rng.value})"
    return f"(atleast {rng.minimum})"


def to_sexpr(e: ClassExpression) -> str:
    if isinstance(e, Top):
        return "top"
    if isinstance(e, Bottom):
        return "bottom"
    if isinstance(e, AtomicConcept):
        return e.name
    if isinstance(e, Nominal):
        return "{" + e.node + "}"
    if isinstance(e, Not):
        return f"(not {to_sexpr(e.operand)})"
    if isinstance(e, And):
        return f"(and {to_sexpr(e.left)} {to_sexpr(e.right)})"
    if isinstance(e, Or):
        return f"(or {to_sexpr(e.left)} {to_sexpr(e.right)})"
    if isinstance(e, Exists):
        return f"(some {_role_str(e.role)} {to_sexpr(e.filler)})"
    if isinstance(e, Forall):
        return f"(all {_role_str(e.role)} {to_sexpr(e.filler)})"
    if isinstance(e, MinCard):
        return f"(min {e.k} {_role_str(e.role)} {to_sexpr(e.filler)})"
    if isinstance(e, MaxCard):
        return f"(max {e.k} {_role_str(e.role)} {to_sexpr(e.filler)})"
    if isinstance(e, ExactCard):
        return f"(exactly {e.k} {_role_str(e.role)} {to_sexpr(e.filler)})"
    if isinstance(e, SelfRestriction):
        return f"(self {_role_str(e.role)})"
    if isinstance(e, OutDegreeIs):
        return f"(outdeg {e.k})"
    if isinstance(e, OutDegreeAtLeast):
        return f"(outdeg>= {e.k})"
    if isinstance(e, DataAll):
        return f"(dall {_range_str(e.range)})"
    if isinstance(e, DataExact):
        return f"(dexactly {e.k} {_range_str(e.range)})"
    raise TypeError(f"not a class expression: {e!r}")


_TOKEN = re.compile(r"\s*(?:(\()|(\))|(\{)|(\})|([^\s(){}]+))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.lastindex is None:
            break
        tokens.append((m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    return tokens


class _ExprParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def offset(self, char_index: int | None = None) -> int:
        if char_index is None:
            char_index = self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)
        return len(self.text[:char_index].encode("utf-8"))

    def fail(self, message: str):
        raise ExpressionSyntaxError(message, self.offset())

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self) -> str:
        if self.i >= len(self.tokens):
            self.fail("unexpected end of expression")
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str):
        if self.peek() != tok:
            self.fail(f"expected {tok!r}")
        self.i += 1

    def integer(self) -> int:
        tok = self.peek()
        if tok is None or not tok.isdigit():
            self.fail("expected a nonnegative integer")
        self.i += 1
        return int(tok)

    def name(self) -> str:
        tok = self.peek()
        if tok is None or tok in "(){}":
            self.fail("expected a name")
        self.i += 1
        return tok

    def role(self) -> RoleExpr:
        if self.peek() == "(":
            self.i += 1
            if self.take() != "inv":
                self.i -= 1
                self.fail("expected 'inv'")
            r = self.name()
            self.expect(")")
            return Inverse(r)
        return self.name()

    def expr(self) -> ClassExpression:
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of expression")
        if tok == "{":
            self.i += 1
            node = self.name()
            self.expect("}")
            return Nominal(node)
        if tok != "(":
            self.i += 1
            if tok in ("top", "Thing", "owl:Thing"):
                return TOP
            if tok in ("bottom", "Nothing", "owl:Nothing"):
                return BOTTOM
            if tok in ")}":
                self.i -= 1
                self.fail(f"unexpected {tok!r}")
            return AtomicConcept(tok)
        self.i += 1
        op = self.name()
        if op in ("and", "or"):
            parts = [self.expr(), self.expr()]
            while self.peek() not in (")", None):
                parts.append(self.expr())
            out = conj(*parts) if op == "and" else disj(*parts)
        elif op == "not":
            out = Not(self.expr())
        elif op in ("some", "all"):
            r = self.role()
            f = self.expr()
            out = Exists(r, f) if op == "some" else Forall(r, f)
        elif op in ("min", "max", "exactly"):
            k = self.integer()
            r = self.role()
            f = self.expr()
            out = {"min": MinCard, "max": MaxCard, "exactly": ExactCard}[op](k, r, f)
        elif op == "self":
            out = SelfRestriction(self.role())
        elif op == "nominal":
            out = Nominal(self.name())
        elif op == "outdeg":
            out = OutDegreeIs(self.integer())
        elif op == "outdeg>=":
            out = OutDegreeAtLeast(self.integer())
        else:
            self.i -= 1
            self.fail(f"unknown operator {op!r}")
        self.expect(")")
        return out


def parse_expression(text: str) -> ClassExpression:
    """Parse the prefix syntax; raises :class:`ExpressionSyntaxError` with a byte offset."""
    p = _ExprParser(text)
    e = p.expr()
    if p.peek() is not None:
        p.fail("trailing input after expression")
    return e
