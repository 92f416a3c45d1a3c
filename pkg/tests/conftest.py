import pytest

from treeodp import example_tree, materialize


def brute_closure(pairs):
    """Reachability by a fresh breadth-first search from every node."""
    succ = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    closure = set()
    for start in succ:
        frontier, seen = [start], set()
        while frontier:
            nxt = []
            for v in frontier:
                for w in succ.get(v, ()):
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        closure |= {(start, w) for w in seen}
    return closure


def children_of(abox):
    kids = {}
    for r, s, o in abox.role_assertions:
        if r == "hasChild":
            kids.setdefault(s, set()).add(o)
    return kids


def parents_of(abox):
    return {o: s for r, s, o in abox.role_assertions if r == "hasChild"}


@pytest.fixture
def example():
    return example_tree()


@pytest.fixture
def example_m():
    return materialize(example_tree())


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
