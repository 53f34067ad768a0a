"""Rooted ordered binary trees, generators and the text format.

Text grammar (whitespace-insensitive)::

    node  := "(" id child child ")"
    child := node | "."

The two child slots are (left, right).  Ids in the input are read but the
parsed tree is always renumbered in preorder, which is also what
:func:`serialize_tree` writes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from gridtree.report import VerifyReport

DEFAULT_NODE_CAP = 1 << 22

LEFT, RIGHT = 0, 1


class TreeSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class ArityError(TreeSyntaxError):
    pass


class ResourceError(RuntimeError):
    """Requested object would exceed a configured size cap."""


@dataclass(frozen=True)
class Role:
    """Construction role of a node, e.g. ``Role("PT", (i, index))``.

    Tags used by the reduction: TopTree, VarSpine(i, s, index),
    VarBranch(i, index), VarSpineBump(i), PT(i, index), PF(i, index),
    PathExtra(i, side), LiteralLeaf(i, j), BlueSpine(t, index),
    BlueClauseLeaf(j), LastSubtreeSpine(index), VarBumpLeaf(i), Plain.
    """

    tag: str
    args: tuple[int, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.tag
        return f"{self.tag}({','.join(map(str, self.args))})"


Slot = Optional[int]


@dataclass(frozen=True, eq=False)
class RootedOrderedTree:
    """Binary tree with ordered (left, right) child slots.

    ``children[v]`` is a pair whose entries are node ids or ``None``.  The
    constructor does not validate; use :func:`validate_binary`.
    """

    root: Optional[int]
    children: tuple[tuple[Slot, Slot], ...]
    parent: tuple[Optional[int], ...]
    labels: tuple[Optional[Role], ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.labels:
            object.__setattr__(self, "labels", (None,) * len(self.children))

    @classmethod
    def from_children(
        cls,
        children: Sequence[tuple[Slot, Slot]],
        root: int = 0,
        labels: Sequence[Optional[Role]] | None = None,
    ) -> "RootedOrderedTree":
        parent: list[Optional[int]] = [None] * len(children)
        for v, slots in enumerate(children):
            for c in slots:
                if c is not None:
                    parent[c] = v
        return cls(
            root if children else None,
            tuple(tuple(s) for s in children),  # type: ignore[misc]
            tuple(parent),
            tuple(labels) if labels is not None else (),
        )

    def __len__(self) -> int:
        return len(self.children)

    @property
    def size(self) -> int:
        return len(self.children)

    def kids(self, v: int) -> list[int]:
        return [c for c in self.children[v] if c is not None]

    def left(self, v: int) -> Slot:
        return self.children[v][LEFT]

    def right(self, v: int) -> Slot:
        return self.children[v][RIGHT]

    def edges(self) -> list[tuple[int, int]]:
        """(parent, child) pairs in preorder of the child."""
        return [(self.parent[v], v) for v in self.preorder() if self.parent[v] is not None]  # type: ignore[misc]

    def preorder(self) -> list[int]:
        if self.root is None:
            return []
        out, stack = [], [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            left, right = self.children[v]
            if right is not None:
                stack.append(right)
            if left is not None:
                stack.append(left)
        return out

    def depths(self) -> list[int]:
        d = [0] * len(self)
        for v in self.preorder():
            p = self.parent[v]
            if p is not None:
                d[v] = d[p] + 1
        return d

    def subtree_sizes(self) -> list[int]:
        sizes = [1] * len(self)
        for v in reversed(self.preorder()):
            p = self.parent[v]
            if p is not None:
                sizes[p] += sizes[v]
        return sizes

    def ancestors(self, v: int) -> Iterator[int]:
        p = self.parent[v]
        while p is not None:
            yield p
            p = self.parent[p]

    def precedes(self, v: int, w: int) -> bool:
        """Strict ancestor order: v lies on the root path of w and v != w."""
        return v != w and any(a == v for a in self.ancestors(w))

    def leaves(self) -> list[int]:
        return [v for v in self.preorder() if not self.kids(v)]

    def label(self, v: int) -> Optional[Role]:
        return self.labels[v] if v < len(self.labels) else None

    def relabeled(self, perm: Sequence[int]) -> "RootedOrderedTree":
        """Copy with node ``v`` renamed to ``perm[v]``."""
        n = len(self)
        children: list[tuple[Slot, Slot]] = [(None, None)] * n
        labels: list[Optional[Role]] = [None] * n
        for v in range(n):
            children[perm[v]] = tuple(None if c is None else perm[c] for c in self.children[v])  # type: ignore[assignment]
            labels[perm[v]] = self.labels[v]
        root = None if self.root is None else perm[self.root]
        return RootedOrderedTree.from_children(children, root if root is not None else 0, labels)

    def canonical(self) -> tuple["RootedOrderedTree", list[int]]:
        """Renumber in preorder; returns the new tree and the old->new map."""
        perm = [0] * len(self)
        for new, old in enumerate(self.preorder()):
            perm[old] = new
        return self.relabeled(perm), perm

    def same_shape(self, other: "RootedOrderedTree") -> bool:
        return serialize_tree(self) == serialize_tree(other)


class TreeBuilder:
    """Incremental construction; ids follow insertion order."""

    def __init__(self) -> None:
        self._children: list[list[Slot]] = []
        self._labels: list[Optional[Role]] = []

    def add(self, parent: Optional[int] = None, side: int = LEFT, role: Optional[Role] = None) -> int:
        v = len(self._children)
        self._children.append([None, None])
        self._labels.append(role)
        if parent is not None:
            if self._children[parent][side] is not None:
                raise ValueError(f"slot {side} of node {parent} already used")
            self._children[parent][side] = v
        return v

    def path(self, start: Optional[int], count: int, side: int = LEFT, role=None) -> list[int]:
        """Hang ``count`` new nodes as a chain below ``start``.

        The first node goes into ``side`` of ``start``; subsequent links use
        the left slot.  ``role`` may be a callable of the 1-based position.
        """
        nodes = []
        prev, s = start, side
        for idx in range(1, count + 1):
            r = role(idx) if callable(role) else role
            prev = self.add(prev, s, r)
            s = LEFT
            nodes.append(prev)
        return nodes

    def build(self, root: int = 0) -> RootedOrderedTree:
        return RootedOrderedTree.from_children(
            [tuple(c) for c in self._children], root, self._labels  # type: ignore[misc]
        )


def perfect_binary_tree(k: int, node_cap: int = DEFAULT_NODE_CAP) -> RootedOrderedTree:
    """T_k: all 2^k leaves at depth k, 2^(k+1) - 1 nodes, preorder ids."""
    if k < 0:
        raise ValueError("k must be non-negative")
    n = (1 << (k + 1)) - 1
    if n > node_cap:
        raise ResourceError(f"T_{k} has {n} nodes, cap is {node_cap}")
    children: list[tuple[Slot, Slot]] = [(None, None)] * n
    # in preorder the left child of v is v+1 and the right child skips the
    # left subtree
    stack = [(0, k)]
    while stack:
        v, h = stack.pop()
        if h == 0:
            continue
        left = v + 1
        right = v + (1 << h)
        children[v] = (left, right)
        stack.append((right, h - 1))
        stack.append((left, h - 1))
    return RootedOrderedTree.from_children(children)


def _tokens(text: str) -> Iterator[tuple[str, int, int]]:
    line, col, i = 1, 1, 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            col, i = col + 1, i + 1
            continue
        if ch in "().":
            yield ch, line, col
            col, i = col + 1, i + 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            yield text[i:j], line, col
            col, i = col + (j - i), j
            continue
        raise TreeSyntaxError(f"unexpected character {ch!r}", line, col)


def parse_tree(text: str) -> RootedOrderedTree:
    """Parse the nested-parenthesis format; ids are renumbered in preorder."""
    children: list[list[Slot]] = []
    # each frame: [node id, slots filled]
    stack: list[list[int]] = []
    state = "start"  # start | id | child | done
    last = (1, 1)
    for tok, line, col in _tokens(text):
        last = (line, col)
        if state == "done":
            raise TreeSyntaxError(f"trailing token {tok!r}", line, col)
        if state == "id":
            if not tok.isdigit():
                raise TreeSyntaxError(f"expected node id, got {tok!r}", line, col)
            state = "child"
            continue
        if tok == "(":
            if state == "child" and stack[-1][1] >= 2:
                raise ArityError("node has more than 2 children", line, col)
            v = len(children)
            children.append([None, None])
            if stack:
                p = stack[-1]
                children[p[0]][p[1]] = v
                p[1] += 1
            stack.append([v, 0])
            state = "id"
        elif tok == ".":
            if state != "child":
                raise TreeSyntaxError("unexpected '.'", line, col)
            if stack[-1][1] >= 2:
                raise ArityError("node has more than 2 children", line, col)
            stack[-1][1] += 1
        elif tok == ")":
            if state != "child":
                raise TreeSyntaxError("unexpected ')'", line, col)
            if stack[-1][1] != 2:
                raise TreeSyntaxError("node needs exactly two child slots", line, col)
            stack.pop()
            if not stack:
                state = "done"
        else:
            raise TreeSyntaxError(f"unexpected token {tok!r}", line, col)
    if state != "done":
        line, col = last
        raise TreeSyntaxError("unexpected end of input", line, col)
    return RootedOrderedTree.from_children([tuple(c) for c in children])  # type: ignore[misc]


def serialize_tree(t: RootedOrderedTree) -> str:
    """Canonical single-space text with preorder ids (no trailing newline)."""
    if t.root is None:
        return ""
    order = {v: i for i, v in enumerate(t.preorder())}
    out: list[str] = []
    stack: list[object] = [t.root]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        if item is None:
            out.append(".")
            continue
        v = item
        left, right = t.children[v]  # type: ignore[index]
        out.append(f"({order[v]}")
        stack.extend([")", right, left])
    # join with spaces but keep ")" glued to its predecessor
    text = ""
    for tok in out:
        if tok == ")":
            text += ")"
        elif text:
            text += " " + tok
        else:
            text = tok
    return text


def validate_binary(t: RootedOrderedTree) -> VerifyReport:
    report = VerifyReport()
    n = len(t)
    if n == 0 or t.root is None or not 0 <= t.root < n:
        report.add("root", False, "no root")
        return report
    report.add("root", True)
    problems = []
    seen_as_child: dict[int, int] = {}
    for v in range(n):
        slots = t.children[v]
        if len(slots) > 2:
            problems.append(f"node {v} has {len(slots)} child slots")
            continue
        for c in slots:
            if c is None:
                continue
            if not 0 <= c < n:
                problems.append(f"node {v} has unknown child {c}")
            elif c in seen_as_child:
                problems.append(f"node {c} is a child of both {seen_as_child[c]} and {v}")
            else:
                seen_as_child[c] = v
    report.add("arity", not any("slots" in p for p in problems), "; ".join(p for p in problems if "slots" in p))
    parent_problems = [p for p in problems if "slots" not in p]
    for v in range(n):
        expected = seen_as_child.get(v)
        if v == t.root:
            if t.parent[v] is not None or expected is not None:
                parent_problems.append(f"root {v} has a parent")
        elif t.parent[v] != expected:
            parent_problems.append(f"node {v}: parent {t.parent[v]} vs child lists {expected}")
    report.add("parents", not parent_problems, "; ".join(parent_problems[:5]))
    if not parent_problems:
        reached = len(t.preorder())
        report.add("connected", reached == n, "" if reached == n else f"{n - reached} unreachable")
    return report
