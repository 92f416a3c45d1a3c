"""Exception hierarchy. Everything derives from :class:`TreeOdpError` (a ValueError)."""

from __future__ import annotations


class TreeOdpError(ValueError):
    pass


class UnknownTerm(TreeOdpError):
    """A concept, role or data role outside the pattern vocabulary."""

    def __init__(self, name: str, offset: int | None = None):
        self.name = name
        self.offset = offset
        where = f" at byte {offset}" if offset is not None else ""
        super().__init__(f"unknown term {name!r}{where}")


class UnknownNode(TreeOdpError):
    def __init__(self, node: str):
        self.node = node
        super().__init__(f"node {node!r} is not in the domain")


class DuplicateOutDegree(TreeOdpError):
    def __init__(self, node: str, values):
        self.node = node
        self.values = tuple(values)
        super().__init__(f"node {node!r} has several out-degree values {self.values}")


class NotATree(TreeOdpError):
    def __init__(self, report):
        self.report = report
        super().__init__(
            f"structure is not a rooted tree (roots={list(report.roots)}, "
            f"multiParent={list(report.multi_parent)}, unreachable={len(report.unreachable)})"
        )


class NotMaterialized(TreeOdpError):
    def __init__(self):
        super().__init__("queries need a materialized interpretation; call materialize() first")


class NBoundExceeded(TreeOdpError):
    def __init__(self, node: str, child_count: int, bound: int):
        self.node = node
        self.child_count = child_count
        self.bound = bound
        super().__init__(f"node {node!r} has {child_count} children, more than the bound {bound}")


class ConflictingOutDegree(TreeOdpError):
    def __init__(self, node: str, asserted: int, computed: int):
        self.node = node
        self.asserted = asserted
        self.computed = computed
        super().__init__(f"node {node!r} asserts out-degree {asserted} but has {computed} children")


# -- parsing ------------------------------------------------------------------

class ParseError(TreeOdpError):
    """Malformed input; ``offset`` is a 0-based byte offset into the UTF-8 source."""

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (byte {offset})")


class NewickError(ParseError):
    pass


class UnbalancedParentheses(NewickError):
    pass


class EmptySubtree(NewickError):
    pass


class DuplicateLabel(NewickError):
    pass


class TrailingInput(NewickError):
    pass


class ReservedLabel(NewickError):
    pass


class NewickSyntaxError(NewickError):
    pass


class TurtleSyntaxError(ParseError):
    pass


class NonIntegerOutDegree(ParseError):
    pass


class ExpressionSyntaxError(ParseError):
    pass
