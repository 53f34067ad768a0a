"""Exhaustive search for grid drawings of small rooted trees.

Decides whether a tree with its fixed child order has a straight-line
drawing on the anchored ``w x h`` grid (cells ``0 <= x < w``,
``0 <= y < h``) meeting the requested constraints, and counts such
drawings.  Exponential by nature; sizes are capped.
"""

from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from gridtree.geometry import LatticePoint, conflict_arrays, lattice_points_inside, segments_conflict
from gridtree.tree import RootedOrderedTree
from gridtree.verify import GridDims, GridEmbedding, rotation_ok, verify

DEFAULT_NODE_CAP = 14
DEFAULT_CELL_CAP = 25
ORACLE_NODE_CAP = 7
ORACLE_CELL_CAP = 12

MODES = ("upward", "weakly_upward", "general")


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SolveOptions:
    mode: str = "upward"
    respect_rotation: bool = True
    forbid_edge_through_vertex: bool = True
    count_all: bool = False
    node_order: str = "preorder"

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.node_order not in ("preorder", "heuristic"):
            raise ValueError(f"unknown node order {self.node_order!r}")

    def checks(self) -> set[str]:
        """Verifier flags equivalent to these options."""
        flags = {"injective", "bounds", "planar"}
        if self.mode != "general":
            flags.add(self.mode)
        if self.respect_rotation:
            flags.add("rotation")
        if self.forbid_edge_through_vertex:
            flags.add("edge_through_vertex")
        return flags


@dataclass
class SolveResult:
    embeddable: bool
    embedding: Optional[GridEmbedding] = None
    count: Optional[int] = None
    expanded: int = 0
    time_ms: float = 0.0
    stats: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "embeddable" if self.embeddable else "not_embeddable"

    def stats_line(self) -> str:
        return f"expanded={self.expanded} time_ms={self.time_ms:.0f}"


def _caps(node_cap: Optional[int], cell_cap: Optional[int]) -> tuple[int, int]:
    env = os.environ.get("GRIDTREE_NODE_CAP")
    if node_cap is None:
        node_cap = int(env) if env else DEFAULT_NODE_CAP
    if cell_cap is None:
        cell_cap = max(DEFAULT_CELL_CAP, int(env) * 2) if env else DEFAULT_CELL_CAP
    return node_cap, cell_cap


def _order(t: RootedOrderedTree, how: str) -> list[int]:
    if how == "preorder":
        return t.preorder()
    # heuristic: preorder, but visit the larger subtree first
    sizes = t.subtree_sizes()
    out, stack = [], [t.root]
    while stack:
        v = stack.pop()
        out.append(v)
        stack.extend(sorted(t.kids(v), key=lambda c: sizes[c]))
    return out


@lru_cache(maxsize=1 << 20)
def _conflict(q: tuple[int, int], p: tuple[int, int], other) -> bool:
    return segments_conflict((q, p), other)


@lru_cache(maxsize=1 << 16)
def _inner_points(q: tuple[int, int], p: tuple[int, int]) -> tuple[tuple[int, int], ...]:
    return tuple(lattice_points_inside(q, p))


class _Search:
    def __init__(self, t: RootedOrderedTree, dims: GridDims, opts: SolveOptions) -> None:
        self.t = t
        self.w, self.h = dims.width, dims.height
        self.opts = opts
        self.order = _order(t, opts.node_order)
        self.sizes = t.subtree_sizes()
        self.height = [0] * t.size
        for v in reversed(t.preorder()):
            for c in t.kids(v):
                self.height[v] = max(self.height[v], self.height[c] + 1)
        # scan order: top row first, left to right
        self.cells = [(x, y) for y in range(self.h - 1, -1, -1) for x in range(self.w)]
        self.pos: dict[int, tuple[int, int]] = {}
        self.used: set[tuple[int, int]] = set()
        self.edges: list[tuple[tuple[int, int], tuple[int, int]]] = []
        self.row_free = [self.w] * self.h
        # interior lattice points of placed edges, with multiplicity
        self.blocked: dict[tuple[int, int], int] = {}
        self.expanded = 0
        self.count = 0
        self.witness: Optional[dict[int, tuple[int, int]]] = None

    def free_below(self, y: int) -> int:
        return sum(self.row_free[:y])

    def fits(self, v: int, p: tuple[int, int]) -> bool:
        t, opts = self.t, self.opts
        parent = t.parent[v]
        if opts.mode == "upward":
            if p[1] < self.height[v]:
                return False
            # descendants all need cells strictly below p
            if self.free_below(p[1]) < self.sizes[v] - 1:
                return False
        if parent is None:
            return True
        q = self.pos[parent]
        if opts.mode == "upward" and not q[1] > p[1]:
            return False
        if opts.mode == "weakly_upward" and not q[1] >= p[1]:
            return False
        if opts.forbid_edge_through_vertex:
            if self.blocked.get(p):
                return False
            if any(u in self.used for u in _inner_points(q, p)):
                return False
        for other in self.edges:
            if _conflict(q, p, other):
                return False
        if opts.respect_rotation:
            grand = t.parent[parent]
            left, right = t.children[parent]
            if grand is not None and left is not None and right is not None:
                sibling = left if v == right else right
                if sibling in self.pos:
                    lp = self.pos[left] if v == right else p
                    rp = p if v == right else self.pos[right]
                    if not rotation_ok(q, self.pos[grand], lp, rp):
                        return False
        return True

    def run(self, idx: int = 0) -> bool:
        """Depth-first search; returns True to stop early."""
        if idx == len(self.order):
            self.count += 1
            if self.witness is None:
                self.witness = dict(self.pos)
            return not self.opts.count_all
        v = self.order[idx]
        parent = self.t.parent[v]
        for p in self.cells:
            if p in self.used:
                continue
            if self.opts.mode == "upward" and parent is not None and p[1] >= self.pos[parent][1]:
                continue
            if not self.fits(v, p):
                continue
            self.expanded += 1
            self.pos[v] = p
            self.used.add(p)
            self.row_free[p[1]] -= 1
            if parent is not None:
                q = self.pos[parent]
                self.edges.append((q, p))
                for u in _inner_points(q, p):
                    self.blocked[u] = self.blocked.get(u, 0) + 1
            stop = self.run(idx + 1)
            if parent is not None:
                self.edges.pop()
                for u in _inner_points(q, p):
                    self.blocked[u] -= 1
            self.row_free[p[1]] += 1
            self.used.discard(p)
            del self.pos[v]
            if stop:
                return True
        return False


def solve(
    t: RootedOrderedTree,
    dims: GridDims,
    opts: SolveOptions = SolveOptions(),
    node_cap: Optional[int] = None,
    cell_cap: Optional[int] = None,
) -> SolveResult:
    """Decide drawability; with ``opts.count_all`` also count all drawings.

    The witness is the first drawing in search order (nodes in preorder,
    cells scanned top row first, left to right) and is re-verified.
    """
    node_cap, cell_cap = _caps(node_cap, cell_cap)
    if t.size > node_cap or dims.cells > cell_cap:
        raise CapExceeded(
            f"{t.size} nodes on {dims.cells} cells exceeds caps ({node_cap} nodes, {cell_cap} cells)"
        )
    start = time.perf_counter()
    if t.size == 0 or t.size > dims.cells:
        return SolveResult(False, count=0 if opts.count_all else None)
    search = _Search(t, dims, opts)
    search.run()
    elapsed = (time.perf_counter() - start) * 1000
    witness = None
    if search.witness is not None:
        witness = {v: LatticePoint(*p) for v, p in search.witness.items()}
        report = verify(t, witness, dims, opts.checks(), anchor=(0, 0))
        if not report.passed:
            raise AssertionError(f"solver witness failed verification:\n{report.render()}")
    return SolveResult(
        witness is not None,
        witness,
        search.count if opts.count_all else None,
        search.expanded,
        elapsed,
    )


def count_embeddings(
    t: RootedOrderedTree,
    dims: GridDims,
    opts: SolveOptions = SolveOptions(),
    node_cap: Optional[int] = None,
    cell_cap: Optional[int] = None,
) -> int:
    opts = SolveOptions(opts.mode, opts.respect_rotation, opts.forbid_edge_through_vertex, True, opts.node_order)
    result = solve(t, dims, opts, node_cap, cell_cap)
    assert result.count is not None
    return result.count


# --- unpruned oracle ----------------------------------------------------------


def _half_arr(ref, d):
    c = ref[..., 0] * d[..., 1] - ref[..., 1] * d[..., 0]
    dot = ref[..., 0] * d[..., 0] + ref[..., 1] * d[..., 1]
    return np.where(c > 0, 1, np.where(c < 0, 3, np.where(dot > 0, 0, 2)))


def _rotation_arr(pos, par, left, right):
    ref, dl, dr = par - pos, left - pos, right - pos
    hl, hr = _half_arr(ref, dl), _half_arr(ref, dr)
    c = dl[..., 0] * dr[..., 1] - dl[..., 1] * dr[..., 0]
    same = (hl == hr) & (c > 0)
    return (hl != 0) & (hr != 0) & ((hl < hr) | same)


def _interior_arr(p, a, b):
    cr = (b[..., 0] - a[..., 0]) * (p[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (p[..., 0] - a[..., 0])
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    within = np.all((lo <= p) & (p <= hi), axis=-1)
    return (cr == 0) & within & np.any(p != a, axis=-1) & np.any(p != b, axis=-1)


@lru_cache(maxsize=64)
def _grid_tables(width: int, height: int):
    """Predicate tables over cell indices of the anchored grid.

    conflict[a, b, c, d]: segment ab conflicts with segment cd.
    inside[p, a, b]: cell p lies strictly inside segment ab.
    rot[v, p, l, r]: CCW order (p, l, r) around v.
    """
    grid = np.array([(x, y) for y in range(height) for x in range(width)], dtype=np.int64)
    c = len(grid)
    a, b, cc, d = (grid[idx] for idx in np.indices((c, c, c, c)).reshape(4, -1))
    conflict = conflict_arrays(a, b, cc, d).reshape(c, c, c, c)
    rot = _rotation_arr(a, b, cc, d).reshape(c, c, c, c)
    p, a3, b3 = (grid[idx] for idx in np.indices((c, c, c)).reshape(3, -1))
    inside = _interior_arr(p, a3, b3).reshape(c, c, c)
    return grid[:, 1], conflict, inside, rot


@lru_cache(maxsize=32)
def _injective_maps(cells: int, n: int) -> np.ndarray:
    maps = np.array(list(itertools.permutations(range(cells), n)), dtype=np.intp).reshape(-1, n)
    maps.flags.writeable = False
    return maps


def oracle_enumerate(
    t: RootedOrderedTree,
    dims: GridDims,
    opts: SolveOptions = SolveOptions(),
    vectorized: bool = True,
) -> int:
    """Count drawings by enumerating every injective map nodes -> cells.

    No pruning: each complete map is tested against every requested check.
    ``vectorized=False`` calls :func:`gridtree.verify.verify` per map; the
    default evaluates the same predicates for all maps at once through
    per-grid lookup tables.
    """
    n, cells = t.size, dims.cells
    if n > ORACLE_NODE_CAP or cells > ORACLE_CELL_CAP:
        raise CapExceeded(f"oracle limited to {ORACLE_NODE_CAP} nodes and {ORACLE_CELL_CAP} cells")
    if n == 0 or n > cells:
        return 0
    flags = opts.checks()
    if not vectorized:
        grid = [(x, y) for y in range(dims.height) for x in range(dims.width)]
        total = 0
        for perm in itertools.permutations(range(cells), n):
            e = {v: grid[c] for v, c in enumerate(perm)}
            if verify(t, e, dims, flags, anchor=(0, 0)).passed:
                total += 1
        return total
    ys, conflict, inside, rot = _grid_tables(dims.width, dims.height)
    maps = _injective_maps(cells, n)
    cols = [maps[:, v] for v in range(n)]
    ok = np.ones(len(maps), dtype=bool)
    edges = t.edges()
    if "upward" in flags:
        for p, c in edges:
            ok &= ys[cols[p]] > ys[cols[c]]
    if "weakly_upward" in flags:
        for p, c in edges:
            ok &= ys[cols[p]] >= ys[cols[c]]
    for x in range(len(edges)):
        for y in range(x + 1, len(edges)):
            (p1, c1), (p2, c2) = edges[x], edges[y]
            ok &= ~conflict[cols[p1], cols[c1], cols[p2], cols[c2]]
    if "edge_through_vertex" in flags:
        for p, c in edges:
            for u in range(n):
                if u not in (p, c):
                    ok &= ~inside[cols[u], cols[p], cols[c]]
    if "rotation" in flags:
        for v in range(n):
            par = t.parent[v]
            left, right = t.children[v]
            if par is None or left is None or right is None:
                continue
            ok &= rot[cols[v], cols[par], cols[left], cols[right]]
    return int(ok.sum())
