"""Reading trees from Newick text and ABoxes from a Turtle subset.

Newick grammar accepted::

    tree    := subtree ";"
    subtree := label | "(" subtree ("," subtree)* ")" label?

Each subtree may carry a ``:length`` suffix, and ``[...]`` comments may appear
between tokens. Both are discarded. Unlabeled internal nodes are named ``_n1``,
``_n2``, ... in pre-order. Apart from names of exactly that form, labels
starting with ``_`` are reserved and rejected.

All error offsets are 0-based byte offsets into the UTF-8 encoded input.
"""

from __future__ import annotations

import re
from urllib.parse import unquote

from .core import (
    HAS_CHILD, HAS_OUT_DEGREE, HAS_PARENT, TreeAbox, describe_tree, is_concept, is_data_role,
    is_role, validate_structure,
)
from .errors import (
    DuplicateLabel, EmptySubtree, NewickSyntaxError, NonIntegerOutDegree, NotATree,
    ReservedLabel, TrailingInput, TurtleSyntaxError, UnbalancedParentheses, UnknownTerm,
)

SYNTHETIC_PREFIX = "_n"
_SYNTHETIC_RE = re.compile(r"_n[0-9]+\Z")
_NEWICK_LABEL = re.compile(r"[^\s()\[\]':;,]+")
_NEWICK_LENGTH = re.compile(r"[-+]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][-+]?[0-9]+)?")


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


# -- Newick --------------------------------------------------------------------

class _NewickNode:
    __slots__ = ("label", "children", "offset")

    def __init__(self, offset: int, label: str | None = None):
        self.offset = offset
        self.label = label
        self.children: list[_NewickNode] = []


class _NewickReader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, cls, message: str, index: int | None = None):
        raise cls(message, _byte_offset(self.text, self.pos if index is None else index))

    def skip(self) -> None:
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch.isspace():
                self.pos += 1
            elif ch == "[":
                end = text.find("]", self.pos)
                if end < 0:
                    self.error(NewickSyntaxError, "unterminated comment")
                self.pos = end + 1
            else:
                break

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def label(self) -> str | None:
        self.skip()
        m = _NEWICK_LABEL.match(self.text, self.pos)
        if not m:
            return None
        label = m.group()
        if label.startswith("_") and not _SYNTHETIC_RE.match(label):
            self.error(ReservedLabel, f"labels starting with '_' are reserved: {label!r}")
        self.pos = m.end()
        return label

    def branch_length(self) -> None:
        if self.peek() != ":":
            return
        self.pos += 1
        self.skip()
        m = _NEWICK_LENGTH.match(self.text, self.pos)
        if not m:
            self.error(NewickSyntaxError, "expected a branch length after ':'")
        self.pos = m.end()

    def parse(self) -> _NewickNode:
        stack: list[_NewickNode] = []
        current: _NewickNode | None = None
        while True:
            # expecting a subtree
            ch = self.peek()
            if ch == "(":
                stack.append(_NewickNode(self.pos))
                self.pos += 1
                continue
            start = self.pos
            label = self.label()
            if label is None:
                if ch in ("", ";") and stack:
                    self.error(UnbalancedParentheses, "unclosed '('", stack[-1].offset)
                if ch in ("", ";"):
                    self.error(EmptySubtree, "empty tree")
                if ch in (",", ")"):
                    self.error(EmptySubtree, "empty subtree")
                self.error(NewickSyntaxError, f"unexpected character {ch!r}")
            current = _NewickNode(start, label)
            # a subtree was completed: close parentheses until a ',' or ';'
            while True:
                self.branch_length()
                ch = self.peek()
                if ch == ",":
                    if not stack:
                        self.error(NewickSyntaxError, "',' outside parentheses")
                    stack[-1].children.append(current)
                    self.pos += 1
                    break
                if ch == ")":
                    if not stack:
                        self.error(UnbalancedParentheses, "unmatched ')'")
                    stack[-1].children.append(current)
                    current = stack.pop()
                    self.pos += 1
                    self.skip()
                    current.label = self.label()
                    continue
                if ch == ";":
                    if stack:
                        self.error(UnbalancedParentheses, "unclosed '('", stack[-1].offset)
                    self.pos += 1
                    if self.peek():
                        self.error(TrailingInput, "input after ';'")
                    return current
                if ch == "":
                    if stack:
                        self.error(UnbalancedParentheses, "unclosed '('", stack[-1].offset)
                    self.error(NewickSyntaxError, "missing ';'")
                if ch == "(":
                    self.error(NewickSyntaxError, "unexpected '('")
                self.error(NewickSyntaxError, f"unexpected {ch!r} after subtree")


def _preorder(root):
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def parse_newick(text: str) -> TreeAbox:
    """Parse one Newick tree into an ABox with the full node classification."""
    if not text or not text.strip():
        raise EmptySubtree("empty input", 0)
    reader = _NewickReader(text)
    root = reader.parse()
    seen: dict[str, int] = {}
    for node in _preorder(root):
        if node.label is None:
            continue
        if node.label in seen:
            raise DuplicateLabel(f"duplicate label {node.label!r}", _byte_offset(text, node.offset))
        seen[node.label] = node.offset
    counter = 0
    for node in _preorder(root):
        if node.label is None:
            counter += 1
            while f"{SYNTHETIC_PREFIX}{counter}" in seen:
                counter += 1
            node.label = f"{SYNTHETIC_PREFIX}{counter}"
    children = {node.label: [c.label for c in node.children] for node in _preorder(root)}
    return describe_tree(children, [root.label])


def _check_newick_label(node: str) -> str:
    m = _NEWICK_LABEL.fullmatch(node)
    if not m or (node.startswith("_") and not _SYNTHETIC_RE.match(node)):
        raise ValueError(f"node name {node!r} cannot be written as a Newick label")
    return node


def write_newick(abox: TreeAbox) -> str:
    """Canonical Newick: children ordered by name, every node labeled, no lengths."""
    report = validate_structure(abox)
    if not report.is_tree:
        raise NotATree(report)
    kids: dict[str, list[str]] = {n: [] for n in abox.individuals}
    for p, c in abox.role(HAS_CHILD) | {(p, c) for c, p in abox.role(HAS_PARENT)}:
        kids[p].append(c)
    root = report.roots[0]
    order, stack = [], [root]
    while stack:
        n = stack.pop()
        order.append(n)
        stack.extend(kids[n])
    rendered: dict[str, str] = {}
    for n in reversed(order):
        label = _check_newick_label(n)
        cs = sorted(kids[n])
        rendered[n] = f"({','.join(rendered.pop(c) for c in cs)}){label}" if cs else label
    return rendered[root] + ";"


# -- Turtle subset ---------------------------------------------------------------

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"
RDF_TYPE = RDF_NS + "type"
_INTEGER_TYPES = {XSD_NS + t for t in (
    "integer", "nonNegativeInteger", "positiveInteger", "int", "long", "short",
    "unsignedInt", "unsignedLong", "unsignedShort")}

_LOCAL = r"(?:[\w-]|%[0-9A-Fa-f]{2})(?:(?:[\w.-]|%[0-9A-Fa-f]{2})*(?:[\w-]|%[0-9A-Fa-f]{2}))?"
_TTL_TOKEN = re.compile(
    r"(?P<iri><[^<>\"{}|^`\\\s]*>)"
    r"|(?P<directive>@prefix\b|@base\b|PREFIX\b|BASE\b)"
    r"|(?P<string>\"(?:[^\"\\\n]|\\.)*\")"
    r"|(?P<dtype>\^\^)"
    r"|(?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)"
    r"|(?P<number>[+-]?(?:[0-9]+\.[0-9]+|\.[0-9]+|[0-9]+)(?:[eE][+-]?[0-9]+)?)"
    r"|(?P<pname>(?:[A-Za-z](?:[\w.-]*[\w-])?)?:(?:" + _LOCAL + r")?)"
    r"|(?P<a>a\b)"
    r"|(?P<punct>[.;,])"
)


class _TurtleReader:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        self.i = 0
        self.prefixes: dict[str, str] = {}
        self._tokenize()

    def _tokenize(self) -> None:
        text, pos = self.text, 0
        while pos < len(text):
            ch = text[pos]
            if ch.isspace():
                pos += 1
                continue
            if ch == "#":
                end = text.find("\n", pos)
                pos = len(text) if end < 0 else end + 1
                continue
            m = _TTL_TOKEN.match(text, pos)
            if not m:
                raise TurtleSyntaxError(f"unexpected character {ch!r}", _byte_offset(text, pos))
            self.tokens.append((m.lastgroup, m.group(), pos))
            pos = m.end()

    def fail(self, message: str, index: int | None = None):
        if index is None:
            index = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise TurtleSyntaxError(message, _byte_offset(self.text, index))

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, "", len(self.text))

    def take(self, kind: str | None = None, value: str | None = None):
        tok = self.peek()
        if tok[0] is None:
            self.fail("unexpected end of input")
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            self.fail(f"expected {value or kind}, found {tok[1]!r}")
        self.i += 1
        return tok

    def iri(self, tok) -> str:
        kind, text, pos = tok
        if kind == "iri":
            return text[1:-1]
        if kind == "pname":
            prefix, _, local = text.partition(":")
            if prefix not in self.prefixes:
                self.fail(f"undeclared prefix {prefix!r}", pos)
            return self.prefixes[prefix] + local
        self.fail(f"expected an IRI, found {text!r}", pos)

    def local_name(self, iri: str) -> str:
        for prefix, ns in sorted(self.prefixes.items()):
            if ns not in (RDF_NS, XSD_NS) and iri.startswith(ns) and len(iri) > len(ns):
                return unquote(iri[len(ns):])
        cut = max(iri.rfind("#"), iri.rfind("/"))
        return unquote(iri[cut + 1:])

    def directive(self) -> None:
        kind, text, pos = self.take("directive")
        if text.lower().lstrip("@") == "base":
            self.fail("@base is not supported", pos)
        ptok = self.take("pname")
        if not ptok[1].endswith(":"):
            self.fail("expected a prefix name ending in ':'", ptok[2])
        self.prefixes[ptok[1][:-1]] = self.take("iri")[1][1:-1]
        if text.startswith("@"):
            self.take("punct", ".")

    def node(self) -> tuple[str, int]:
        tok = self.peek()
        if tok[0] not in ("iri", "pname"):
            self.fail(f"expected an individual, found {tok[1]!r}")
        self.i += 1
        name = self.local_name(self.iri(tok))
        if not name:
            self.fail("empty individual name", tok[2])
        return name, tok[2]

    def literal_int(self) -> int:
        kind, text, pos = self.peek()
        if kind == "number":
            self.i += 1
            lexical, datatype = text, XSD_NS + "integer"
        elif kind == "string":
            self.i += 1
            lexical, datatype = text[1:-1], XSD_NS + "string"
            if self.peek()[0] == "dtype":
                self.i += 1
                datatype = self.iri(self.take())
            elif self.peek()[0] == "lang":
                self.i += 1
        elif kind in ("iri", "pname", "a"):
            raise NonIntegerOutDegree("out-degree object must be a literal", _byte_offset(self.text, pos))
        else:
            self.fail(f"expected a literal, found {text!r}")
        if datatype not in _INTEGER_TYPES or not re.fullmatch(r"\+?[0-9]+", lexical):
            raise NonIntegerOutDegree(f"out-degree {text!r} is not a nonnegative integer",
                                      _byte_offset(self.text, pos))
        return int(lexical)

    def parse(self) -> TreeAbox:
        concepts, roles, data = set(), set(), set()
        while self.peek()[0] is not None:
            if self.peek()[0] == "directive":
                self.directive()
                continue
            subject, _ = self.node()
            while True:
                ptok = self.take()
                if ptok[0] == "a":
                    predicate = RDF_TYPE
                else:
                    predicate = self.iri(ptok)
                local = None if predicate == RDF_TYPE else self.local_name(predicate)
                if local is not None and not (is_role(local) or is_data_role(local)):
                    raise UnknownTerm(local, _byte_offset(self.text, ptok[2]))
                while True:
                    if predicate == RDF_TYPE:
                        tok = self.take()
                        cls = self.local_name(self.iri(tok))
                        if not is_concept(cls):
                            raise UnknownTerm(cls, _byte_offset(self.text, tok[2]))
                        concepts.add((subject, cls))
                    elif local == HAS_OUT_DEGREE:
                        data.add((subject, HAS_OUT_DEGREE, self.literal_int()))
                    else:
                        obj, _ = self.node()
                        roles.add((local, subject, obj))
                    if self.peek()[:2] == ("punct", ","):
                        self.i += 1
                        continue
                    break
                if self.peek()[:2] == ("punct", ";"):
                    self.i += 1
                    if self.peek()[:2] == ("punct", "."):
                        break
                    continue
                break
            self.take("punct", ".")
        return TreeAbox(frozenset(concepts), frozenset(roles), frozenset(data))


def parse_abox_turtle(text: str) -> TreeAbox:
    """Parse the supported Turtle subset: prefixes, ``rdf:type`` triples over pattern
    concepts, object triples over pattern roles and integer ``hasOutDegree`` triples.

    Terms are matched by local name; anything outside the pattern vocabulary
    raises :class:`UnknownTerm`.
    """
    return _TurtleReader(text).parse()


def sniff_format(text: str) -> str:
    """Guess ``newick`` or ``turtle`` from content."""
    stripped = text.strip()
    if re.search(r"^\s*(@prefix|PREFIX)\b", text, re.MULTILINE) or re.search(r"\s\.\s*$", text):
        return "turtle"
    if stripped.endswith(";"):
        return "newick"
    return "turtle"
