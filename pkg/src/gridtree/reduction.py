"""3SAT to upward drawing of a fixed-embedding binary tree on a grid.

The gadget tree hangs ``4n + 4`` subtrees from a perfect binary "top" tree.
Variable ``x_i`` owns subtrees ``4i-3 .. 4i``; the third of them (the
variable gadget) splits into two long paths ``p_t`` and ``p_f`` and the one
drawn higher encodes the truth value.  Every literal occurrence adds a leaf
to ``p_t`` (positive) or ``p_f`` (negative).  The last four subtrees are the
clause-side frame.

Grid coordinates have origin (0, 0) at the bottom-left; rows ``0 .. N`` with
``N = 5n + 4m`` hold the subtrees and must be completely filled, the rows
above hold the top tree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from gridtree.geometry import LatticePoint
from gridtree.tree import LEFT, RIGHT, Role, RootedOrderedTree, TreeBuilder, perfect_binary_tree
from gridtree.verify import GridDims, GridEmbedding

# Literal leaf of clause j on p_t / p_f hangs off path vertex
# 5(n - i + 1) + 4(j - 1) + LITERAL_DELTA (1-based along the path).
LITERAL_DELTA = 0

MAX_BRUTE_FORCE_VARS = 24


class CnfError(ValueError):
    pass


class UnsatisfiedError(ValueError):
    """The assignment given to the encoder does not satisfy the formula."""


class DecodeError(ValueError):
    pass


Literal = tuple[int, bool]  # (variable 1..n, positive?)


@dataclass(frozen=True)
class CnfFormula:
    n: int
    clauses: tuple[tuple[Literal, Literal, Literal], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise CnfError("formula needs at least one variable")
        fixed = []
        for idx, clause in enumerate(self.clauses, start=1):
            if len(clause) != 3:
                raise CnfError(f"clause {idx} has {len(clause)} literals, expected 3")
            vars_ = [v for v, _ in clause]
            if len(set(vars_)) != 3:
                raise CnfError(f"clause {idx} repeats a variable")
            for v in vars_:
                if not 1 <= v <= self.n:
                    raise CnfError(f"clause {idx}: variable {v} out of range 1..{self.n}")
            fixed.append(tuple(sorted((int(v), bool(s)) for v, s in clause)))
        object.__setattr__(self, "clauses", tuple(fixed))

    @property
    def m(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, values: Sequence[bool]) -> bool:
        return all(any(values[v - 1] == pos for v, pos in c) for c in self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.n} {self.m}"]
        for c in self.clauses:
            lines.append(" ".join(str(v if pos else -v) for v, pos in c) + " 0")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Assignment:
    values: tuple[bool, ...]

    def __getitem__(self, i: int) -> bool:
        """Value of variable ``x_i`` (1-based)."""
        return self.values[i - 1]

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def parse(cls, text: str) -> "Assignment":
        """Comma-separated 0/1 flags in variable order."""
        try:
            bits = [int(s) for s in text.split(",") if s.strip()]
        except ValueError:
            raise ValueError(f"bad assignment {text!r}") from None
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"assignment entries must be 0 or 1: {text!r}")
        return cls(tuple(bool(b) for b in bits))

    def format(self) -> str:
        return ",".join("1" if v else "0" for v in self.values)


def parse_dimacs(text: str) -> CnfFormula:
    n: Optional[int] = None
    declared_m = None
    lits: list[int] = []
    clauses = []
    for num, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {num}: bad problem line")
            try:
                n, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise CnfError(f"line {num}: bad problem line") from None
            continue
        if n is None:
            raise CnfError(f"line {num}: clause before problem line")
        for tok in line.split():
            try:
                x = int(tok)
            except ValueError:
                raise CnfError(f"line {num}: bad literal {tok!r}") from None
            if x == 0:
                if len(lits) != 3:
                    raise CnfError(f"line {num}: clause has {len(lits)} literals, expected 3")
                if len({abs(v) for v in lits}) != 3:
                    raise CnfError(f"line {num}: clause repeats a variable")
                clauses.append(tuple((abs(v), v > 0) for v in lits))
                lits = []
            else:
                if abs(x) > n:
                    raise CnfError(f"line {num}: variable {abs(x)} exceeds {n}")
                lits.append(x)
    if n is None:
        raise CnfError("missing problem line")
    if lits:
        raise CnfError("last clause is not terminated by 0")
    if declared_m is not None and declared_m != len(clauses):
        raise CnfError(f"problem line declares {declared_m} clauses, found {len(clauses)}")
    return CnfFormula(n, tuple(clauses))  # type: ignore[arg-type]


def brute_force_sat(f: CnfFormula) -> Optional[Assignment]:
    """First satisfying assignment in lexicographic order (False < True)."""
    if f.n > MAX_BRUTE_FORCE_VARS:
        raise ValueError(f"brute force limited to {MAX_BRUTE_FORCE_VARS} variables, got {f.n}")
    for bits in itertools.product((False, True), repeat=f.n):
        if f.satisfied_by(bits):
            return Assignment(bits)
    return None


# --- construction -------------------------------------------------------------


def ceil_lg(x: int) -> int:
    return (x - 1).bit_length()


def grid_size(n: int, m: int) -> tuple[int, int]:
    """(w, h) of the target grid: one column per subtree, the top tree's
    levels above ``5n + 4m + 1`` subtree rows."""
    subtrees = 4 * n + 4
    return subtrees, ceil_lg(subtrees) + 5 * n + 4 * m + 1


def printed_grid_size(n: int, m: int) -> tuple[int, int]:
    """The dimension formulas with ``4m + 4`` columns, as they are usually
    quoted; they only agree with :func:`grid_size` when ``n == m``."""
    return 4 * m + 4, ceil_lg(4 * m + 4) + 5 * n + 4 * m + 1


def literal_vertex(n: int, i: int, j: int, delta: int = LITERAL_DELTA) -> int:
    """1-based index along p_t/p_f of the parent of the literal leaf of x_i in c_j."""
    return 5 * (n - i + 1) + 4 * (j - 1) + delta


@dataclass
class ReductionOutput:
    formula: CnfFormula
    tree: RootedOrderedTree
    w: int
    h: int
    top_levels: int
    subtree_roots: list[int]  # index s-1 -> node id
    v: dict[int, int] = field(default_factory=dict)
    pt: dict[int, int] = field(default_factory=dict)
    pf: dict[int, int] = field(default_factory=dict)
    lit: dict[tuple[int, int], int] = field(default_factory=dict)  # (i, j) -> leaf id
    top_nodes: list[int] = field(default_factory=list)
    delta: int = LITERAL_DELTA

    @property
    def n(self) -> int:
        return self.formula.n

    @property
    def m(self) -> int:
        return self.formula.m

    @property
    def dims(self) -> GridDims:
        return GridDims(self.w, self.h)

    @property
    def subtree_rows(self) -> int:
        return 5 * self.n + 4 * self.m + 1

    def lit_parent(self, i: int, j: int) -> int:
        p = self.tree.parent[self.lit[i, j]]
        assert p is not None
        return p


def reduce(f: CnfFormula, delta: int = LITERAL_DELTA) -> ReductionOutput:
    n, m = f.n, f.m
    big_n = 5 * n + 4 * m
    w, h = grid_size(n, m)
    levels = ceil_lg(w)
    b = TreeBuilder()

    top = perfect_binary_tree(levels - 1)
    top_ids = [b.add(role=Role("TopTree")) for _ in range(top.size)]
    for v, (left, right) in enumerate(top.children):
        for side, c in ((LEFT, left), (RIGHT, right)):
            if c is not None:
                b._children[top_ids[v]][side] = top_ids[c]
    top_leaves = [top_ids[v] for v in top.leaves()]

    roots: list[int] = []

    def new_root(role: Role) -> int:
        s = len(roots)
        leaf, side = top_leaves[s // 2], (LEFT, RIGHT)[s % 2]
        r = b.add(leaf, side, role)
        roots.append(r)
        return r

    occurrences: dict[tuple[int, int], tuple[int, bool]] = {}
    for j, clause in enumerate(f.clauses, start=1):
        for pos, (var, positive) in enumerate(clause, start=1):
            occurrences[var, j] = (pos, positive)

    out = ReductionOutput(f, None, w, h, levels, roots, delta=delta)  # type: ignore[arg-type]
    for i in range(1, n + 1):
        # spine with a long branch and a bump near the bottom
        r = new_root(Role("VarSpine", (i, 1, 1)))
        spine = [r] + b.path(r, big_n, role=lambda k, i=i: Role("VarSpine", (i, 1, k + 1)))
        b.path(spine[5 * i - 2], big_n - 5 * i + 2, side=RIGHT, role=lambda k, i=i: Role("VarBranch", (i, k)))
        b.add(spine[-2], RIGHT, Role("VarSpineBump", (i,)))

        r = new_root(Role("VarSpine", (i, 2, 1)))
        b.path(r, 5 * i - 4, role=lambda k, i=i: Role("VarSpine", (i, 2, k + 1)))

        r = new_root(Role("VarSpine", (i, 3, 1)))
        vi = ([r] + b.path(r, 5 * i - 5, role=lambda k, i=i: Role("VarSpine", (i, 3, k + 1))))[-1]
        out.v[i] = vi
        length = big_n - 5 * i + 4
        for tag, side in (("PT", LEFT), ("PF", RIGHT)):
            lits = {
                literal_vertex(n, i, j, delta): (j, pos)
                for (var, j), (pos, positive) in occurrences.items()
                if var == i and positive == (tag == "PT")
            }
            prev, slot = vi, side
            for k in range(1, length + 1):
                node = b.add(prev, slot, Role(tag, (i, k)))
                if k == 1:
                    (out.pt if tag == "PT" else out.pf)[i] = node
                    extra = RIGHT if tag == "PT" else LEFT
                    b.add(node, extra, Role("PathExtra", (i, 0 if tag == "PT" else 1)))
                    slot = LEFT if tag == "PT" else RIGHT
                else:
                    slot = LEFT
                if k in lits:
                    j, pos = lits[k]
                    leaf_side = LEFT if pos == 3 else RIGHT
                    out.lit[i, j] = b.add(node, leaf_side, Role("LiteralLeaf", (i, j)))
                    slot = RIGHT if leaf_side == LEFT else LEFT
                prev = node

        r = new_root(Role("VarSpine", (i, 4, 1)))
        b.path(r, 5 * i - 5, role=lambda k, i=i: Role("VarSpine", (i, 4, k + 1)))

    for t in (1, 2, 3):
        r = new_root(Role("BlueSpine", (t, 1)))
        blue = [r] + b.path(r, big_n, role=lambda k, t=t: Role("BlueSpine", (t, k + 1)))
        if t == 3:
            for j in range(1, m + 1):
                b.add(blue[5 * n + 4 * j - 1], RIGHT, Role("BlueClauseLeaf", (j,)))
    r = new_root(Role("LastSubtreeSpine", (1,)))
    last = [r] + b.path(r, 5 * n, role=lambda k: Role("LastSubtreeSpine", (k + 1,)))
    for i in range(1, n + 1):
        b.add(last[5 * i - 5], RIGHT, Role("VarBumpLeaf", (i,)))

    raw = b.build(0)
    tree, perm = raw.canonical()
    out.tree = tree
    out.subtree_roots = [perm[x] for x in roots]
    out.v = {i: perm[x] for i, x in out.v.items()}
    out.pt = {i: perm[x] for i, x in out.pt.items()}
    out.pf = {i: perm[x] for i, x in out.pf.items()}
    out.lit = {key: perm[x] for key, x in out.lit.items()}
    out.top_nodes = sorted(perm[x] for x in top_ids)
    return out


# --- forward direction: assignment -> drawing ---------------------------------


def _literal_offsets(f: CnfFormula, a: Assignment) -> dict[tuple[int, int], tuple[int, int]]:
    """Offset of each literal leaf relative to its parent, per (i, j)."""
    out = {}
    for j, clause in enumerate(f.clauses, start=1):
        vals = [a[v] == pos for v, pos in clause]
        last_true = max(k for k in range(3) if vals[k])
        first_case = None
        second_case = None
        for k, (var, _) in enumerate(clause):
            if k == 0:
                if last_true == 0:
                    first_case, off = "a", (1, -1)
                elif vals[0]:
                    first_case, off = "b", (1, -3)
                else:
                    first_case, off = "c", (1, -2)
            elif k == 1:
                if last_true == 1:
                    second_case, off = "d", (1, -1)
                elif vals[1]:
                    second_case, off = "e", (1, -2)
                elif first_case == "a":
                    second_case, off = "f", (0, -1)
                else:
                    second_case, off = "g", (1, -1)
            else:
                if vals[2]:
                    off = (0, -1)
                elif second_case == "f":
                    off = (-1, -2)
                else:
                    off = (-1, -1)
            out[var, j] = off
    return out


def top_positions(r: ReductionOutput) -> GridEmbedding:
    """Top tree: level d sits on row N + levels - d, nodes left to right at
    x = 0, 1, 2, ... so every level-to-level matching is order preserving."""
    base = 5 * r.n + 4 * r.m
    pos: GridEmbedding = {}
    level = [r.tree.root]
    d = 0
    while level and d < r.top_levels:
        for x, v in enumerate(level):
            pos[v] = LatticePoint(x, base + r.top_levels - d)
        level = [c for v in level for c in r.tree.kids(v) if c in set(r.top_nodes)]
        d += 1
    return pos


def encode_embedding(r: ReductionOutput, a: Assignment) -> GridEmbedding:
    """Upward drawing of the gadget tree for a satisfying assignment.

    Roots of subtree s go to (s - 1, N).  Going down row by row, the
    prescribed vertices (p_t/p_f roots and literal leaves) are placed first,
    then every other child takes the leftmost free point of the row below
    its parent, parents scanned left to right and left children first.
    """
    f = r.formula
    if len(a) != f.n:
        raise ValueError(f"assignment has {len(a)} values for {f.n} variables")
    if not f.satisfied_by(a.values):
        raise UnsatisfiedError("assignment does not satisfy every clause")
    t = r.tree
    big_n = 5 * r.n + 4 * r.m
    pos: GridEmbedding = top_positions(r)
    for s, root in enumerate(r.subtree_roots):
        pos[root] = LatticePoint(s, big_n)
    used = {tuple(p) for p in pos.values()}

    special: dict[int, tuple[int, tuple[int, int]]] = {}  # child -> (anchor, offset)
    for i in range(1, r.n + 1):
        if a[i]:
            special[r.pt[i]] = (r.v[i], (0, -1))
            special[r.pf[i]] = (r.v[i], (1, -2))
        else:
            special[r.pt[i]] = (r.v[i], (-1, -2))
            special[r.pf[i]] = (r.v[i], (0, -1))
    for (i, j), off in _literal_offsets(f, a).items():
        leaf = r.lit[i, j]
        special[leaf] = (t.parent[leaf], off)  # type: ignore[assignment]

    def place(v: int, p: tuple[int, int]) -> None:
        if tuple(p) in used:
            raise AssertionError(f"point {p} assigned twice (node {v})")
        if not (0 <= p[0] < r.w and 0 <= p[1] <= big_n):
            raise AssertionError(f"node {v} placed outside the grid at {p}")
        used.add(tuple(p))
        pos[v] = LatticePoint(*p)

    rows: dict[int, list[int]] = {big_n: list(r.subtree_roots)}
    for y in range(big_n, 0, -1):
        parents = sorted(rows.get(y, []), key=lambda v: pos[v][0])
        for v in parents:
            for c in t.kids(v):
                if c in special:
                    _, (dx, dy) = special[c]
                    place(c, (pos[v][0] + dx, pos[v][1] + dy))
                    rows.setdefault(pos[c][1], []).append(c)
        for v in parents:
            for c in t.kids(v):
                if c in special:
                    continue
                x = next((x for x in range(r.w) if (x, y - 1) not in used), None)
                if x is None:
                    raise AssertionError(f"row {y - 1} is full, cannot place node {c}")
                place(c, (x, y - 1))
                rows.setdefault(y - 1, []).append(c)
    if len(pos) != t.size:
        raise AssertionError(f"placed {len(pos)} of {t.size} nodes")
    return pos


# --- backward direction: drawing -> assignment --------------------------------


def decode_assignment(r: ReductionOutput, e: GridEmbedding) -> Assignment:
    """x_i is true iff the root of p_t lies strictly above the root of p_f."""
    values = []
    for i in range(1, r.n + 1):
        try:
            yt, yf = e[r.pt[i]][1], e[r.pf[i]][1]
        except KeyError as exc:
            raise DecodeError(f"missing position for node {exc.args[0]}") from None
        if yt == yf:
            raise DecodeError(f"x_{i}: p_t and p_f roots share row {yt}")
        values.append(yt > yf)
    return Assignment(tuple(values))


# --- meta file ------------------------------------------------------------------


def format_meta(r: ReductionOutput) -> str:
    lines = [f"dims {r.w} {r.h}", f"cnf {r.n} {r.m}"]
    for j, clause in enumerate(r.formula.clauses, start=1):
        lines.append(f"clause {j} " + " ".join(str(v if p else -v) for v, p in clause))
    lines += [f"root {s} {v}" for s, v in enumerate(r.subtree_roots, start=1)]
    for i in range(1, r.n + 1):
        lines += [f"vi {i} {r.v[i]}", f"pt {i} {r.pt[i]}", f"pf {i} {r.pf[i]}"]
    lines += [f"lit {i} {j} {v}" for (i, j), v in sorted(r.lit.items())]
    lines.append(f"delta {r.delta}")
    return "\n".join(lines) + "\n"


def parse_meta(text: str) -> ReductionOutput:
    """Rebuild the reduction recorded in a meta file and check that the
    recorded node ids match."""
    n = m = None
    clauses: dict[int, tuple[Literal, ...]] = {}
    delta = LITERAL_DELTA
    records: list[list[str]] = []
    for num, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        key = parts[0]
        try:
            if key == "cnf":
                n, m = int(parts[1]), int(parts[2])
            elif key == "clause":
                clauses[int(parts[1])] = tuple((abs(int(x)), int(x) > 0) for x in parts[2:])
            elif key == "delta":
                delta = int(parts[1])
            elif key in ("dims", "root", "vi", "pt", "pf", "lit"):
                [int(x) for x in parts[1:]]
                records.append(parts)
            else:
                raise ValueError(f"unknown record {key!r}")
        except (ValueError, IndexError) as exc:
            raise ValueError(f"meta line {num}: {exc}") from None
    if n is None or m is None or sorted(clauses) != list(range(1, m + 1)):
        raise ValueError("meta file lacks the cnf/clause records")
    f = CnfFormula(n, tuple(clauses[j] for j in range(1, m + 1)))  # type: ignore[arg-type]
    r = reduce(f, delta)
    expected = set(map(tuple, (line.split() for line in format_meta(r).splitlines())))
    for rec in records:
        if tuple(rec) not in expected:
            raise ValueError(f"meta record {' '.join(rec)!r} does not match the rebuilt reduction")
    return r
