"""Square-grid drawings of perfect binary trees.

For odd ``k`` the tree T_k (2^(k+1) - 1 nodes) is drawn inside the
``side x side`` grid with ``side = 2^((k+1)/2)``, 1-based coordinates.  Two
tile variants are built recursively from four quarter-size tiles:

* F leaves ``(half, 1)`` unused,
* G leaves ``(1, 1)`` unused,

where ``half = side / 2``.  Both put the root at ``(half + 1, half)`` and
keep the open column strip ``half < x < half + 1`` free of every edge not
incident to the root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

from gridtree.geometry import LatticePoint
from gridtree.report import VerifyReport
from gridtree.tree import RootedOrderedTree, perfect_binary_tree, validate_binary
from gridtree.verify import GridDims, GridEmbedding, occupancy, rotation_ok, verify

Kind = Literal["F", "G"]

_CHECKS = ("injective", "bounds", "planar", "edge_through_vertex")


class ConstructionError(AssertionError):
    """A construction invariant failed; indicates a bug, not bad input."""


@dataclass(frozen=True)
class Transform:
    """Optional reflections inside a ``side``-square, then a translation."""

    mirror_x: bool = False
    mirror_y: bool = False
    translate: tuple[int, int] = (0, 0)

    def apply(self, p: tuple[int, int], side: int) -> tuple[int, int]:
        x, y = p
        if self.mirror_x:
            x = side + 1 - x
        if self.mirror_y:
            y = side + 1 - y
        return x + self.translate[0], y + self.translate[1]


@dataclass(frozen=True)
class TileDrawing:
    kind: Kind
    k: int
    side: int
    tree: RootedOrderedTree
    embedding: GridEmbedding

    @property
    def half(self) -> int:
        return self.side // 2

    @property
    def root_point(self) -> LatticePoint:
        return LatticePoint(self.half + 1, self.half)

    @property
    def free_point(self) -> LatticePoint:
        return LatticePoint(self.half, 1) if self.kind == "F" else LatticePoint(1, 1)


def _check_k(k: int) -> None:
    if k < 1 or k % 2 == 0:
        raise ValueError(f"k must be an odd integer >= 1, got {k}")


# Quadrant layout: (quadrant, sub-tile kind, transform flags).  The F table
# places the mirrored G copy bottom-left so that its free corner lands on
# (half, 1).
QUADRANTS: dict[str, list[tuple[str, str, bool, bool]]] = {
    "F": [
        ("TL", "F", True, False),
        ("BL", "G", True, False),
        ("TR", "F", False, False),
        ("BR", "G", False, True),
    ],
    "G": [
        ("TL", "F", False, False),
        ("BL", "G", False, False),
        ("TR", "F", False, False),
        ("BR", "G", False, True),
    ],
}


def _offset(quadrant: str, half: int) -> tuple[int, int]:
    return (half if quadrant[1] == "R" else 0, half if quadrant[0] == "T" else 0)


@lru_cache(maxsize=None)
def _raw_positions(kind: str, k: int) -> tuple[tuple[int, int], ...]:
    """Positions indexed by preorder id of T_k; child order not yet fixed."""
    if k == 1:
        return ((2, 1), (1, 2), (2, 2))
    half = 1 << ((k - 1) // 2)
    sub_half = half // 2
    sub_n = (1 << (k - 1)) - 1
    placed: dict[str, tuple[tuple[int, int], ...]] = {}
    free: dict[str, tuple[int, int]] = {}
    for quadrant, sub_kind, mx, my in QUADRANTS[kind]:
        tf = Transform(mx, my, _offset(quadrant, half))
        placed[quadrant] = tuple(tf.apply(p, half) for p in _raw_positions(sub_kind, k - 2))
        sub_free = (sub_half, 1) if sub_kind == "F" else (1, 1)
        free[quadrant] = tf.apply(sub_free, half)

    root = (half + 1, half)
    right_conn = (half + sub_half, half + 1)
    left_conn = (sub_half + 1, half + 1) if kind == "F" else (sub_half, half + 1)
    for point, quadrant in ((right_conn, "TR"), (left_conn, "TL"), (root, "BR")):
        if free[quadrant] != point:
            raise ConstructionError(
                f"{kind}_{k}: {point} is not the free point {free[quadrant]} of quadrant {quadrant}"
            )

    # preorder: root, left connector, TL copy, BL copy, right connector, TR, BR
    pos = [root, left_conn, *placed["TL"], *placed["BL"], right_conn, *placed["TR"], *placed["BR"]]
    assert len(pos) == 3 + 4 * sub_n
    return tuple(pos)


def _orient(pos: list[tuple[int, int]], k: int) -> None:
    """Swap child subtrees in place so every node with a parent sees
    (parent, left, right) counterclockwise; the root gets its left child on
    the left."""
    stack: list[tuple[int, int, int | None]] = [(0, k, None)]
    while stack:
        v, h, parent = stack.pop()
        if h == 0:
            continue
        size = (1 << h) - 1
        left, right = v + 1, v + 1 + size
        if parent is None:
            swap = pos[left] > pos[right]
        else:
            swap = not rotation_ok(pos[v], pos[parent], pos[left], pos[right])
        if swap:
            pos[left : left + size], pos[right : right + size] = pos[right : right + size], pos[left : left + size]
        stack.append((right, h - 1, v))
        stack.append((left, h - 1, v))


@lru_cache(maxsize=None)
def _tile(kind: str, k: int) -> TileDrawing:
    pos = list(_raw_positions(kind, k))
    _orient(pos, k)
    tree = perfect_binary_tree(k)
    emb = {v: LatticePoint(*p) for v, p in enumerate(pos)}
    return TileDrawing(kind, k, 1 << ((k + 1) // 2), tree, emb)  # type: ignore[arg-type]


def build_tile(kind: Kind, k: int) -> TileDrawing:
    """The F or G drawing of T_k.  Tiles are cached; treat them as read-only."""
    if kind not in ("F", "G"):
        raise ValueError(f"tile kind must be 'F' or 'G', got {kind!r}")
    _check_k(k)
    return _tile(kind, k)


def embed_perfect(k: int) -> tuple[RootedOrderedTree, GridEmbedding]:
    tile = build_tile("F", k)
    return tile.tree, dict(tile.embedding)


def embed_perfect_with_parent(k: int, check: bool = True) -> tuple[RootedOrderedTree, GridEmbedding]:
    """T_k under an extra root, filling the whole ``side x side`` grid.

    The extra root sits on the F tile's free point.  The result is verified
    before it is returned unless ``check`` is false.
    """
    tile = build_tile("F", k)
    n = tile.tree.size
    children = [(1, None)] + [
        tuple(None if c is None else c + 1 for c in slots) for slots in tile.tree.children
    ]
    tree = RootedOrderedTree.from_children(children)  # type: ignore[arg-type]
    emb = {0: tile.free_point}
    emb.update({v + 1: p for v, p in tile.embedding.items()})
    if check:
        dims = GridDims(tile.side, tile.side)
        report = verify(tree, emb, dims, _CHECKS, anchor=(1, 1))
        if not report.passed or occupancy(emb, dims, anchor=(1, 1)):
            raise ConstructionError(f"plus-parent drawing for k={k} failed:\n{report.render()}")
    assert len(emb) == n + 1
    return tree, emb


def strip_violations(tile: TileDrawing) -> list[tuple[int, int]]:
    """Edges not incident to the root that enter the open central strip."""
    half = tile.half
    root = tile.tree.root
    bad = []
    for p, c in tile.tree.edges():
        if root in (p, c):
            continue
        xs = tile.embedding[p][0], tile.embedding[c][0]
        if min(xs) <= half and max(xs) >= half + 1:
            bad.append((p, c))
    return bad


def check_tile_properties(tile: TileDrawing) -> VerifyReport:
    """Root placement, strip, free corner, plus planarity and bounds."""
    report = VerifyReport()
    emb, tree = tile.embedding, tile.tree
    expected_n = (1 << (tile.k + 1)) - 1
    report.add("node_count", tree.size == expected_n == len(emb), f"{len(emb)} placed, expected {expected_n}")
    report.add("binary", validate_binary(tree).passed)
    root_at = emb.get(tree.root) if tree.root is not None else None
    report.add("root_position", root_at == tile.root_point, f"root at {root_at}, expected {tile.root_point}")
    bad_strip = strip_violations(tile)
    report.add("strip", not bad_strip, " ".join(f"{p}-{c}" for p, c in bad_strip[:5]))
    dims = GridDims(tile.side, tile.side)
    inside = all(1 <= x <= tile.side and 1 <= y <= tile.side for x, y in emb.values())
    report.add("bounds", inside, "" if inside else "point outside [1, side]^2")
    used = {tuple(p) for p in emb.values()}
    free_ok = inside and tuple(tile.free_point) not in used and len(used) == tile.side**2 - 1
    prop = "free_point_F" if tile.kind == "F" else "free_point_G"
    report.add(prop, free_ok, f"expected only {tuple(tile.free_point)} unused")
    sub = verify(tree, emb, dims, ("injective", "planar", "edge_through_vertex"))
    for name, res in sub.checks.items():
        report.add(name, res.passed, res.detail)
    return report


# --- baseline -----------------------------------------------------------------


def hv_area_bound(n: int) -> int:
    """Documented area guarantee of :func:`hv_layout`: n * (floor(log2 n) + 1)."""
    return n * (int(math.log2(n)) + 1) if n > 0 else 0


def hv_layout(t: RootedOrderedTree) -> GridEmbedding:
    """Right-heavy HV drawing: the smaller child subtree hangs directly below
    its parent and the larger one is placed to the right of it.

    Height is at most floor(log2 n) + 1 and width at most n, so the area is
    within :func:`hv_area_bound`.
    """
    report = validate_binary(t)
    if not report.passed:
        raise ValueError(f"hv_layout needs a binary tree: {report.render()}")
    sizes = t.subtree_sizes()
    # local layout per node: offsets relative to the node, y grows downward
    local: dict[int, tuple[dict[int, tuple[int, int]], int, int]] = {}
    for v in reversed(t.preorder()):
        kids = sorted(t.kids(v), key=lambda c: sizes[c])
        pts = {v: (0, 0)}
        width, height = 1, 1
        if len(kids) == 1:
            sub, w, h = local.pop(kids[0])
            pts.update({u: (x + 1, y) for u, (x, y) in sub.items()})
            width, height = w + 1, max(1, h)
        elif len(kids) == 2:
            small, big = kids
            sub_s, ws, hs = local.pop(small)
            sub_b, wb, hb = local.pop(big)
            pts.update({u: (x, y + 1) for u, (x, y) in sub_s.items()})
            pts.update({u: (x + ws, y) for u, (x, y) in sub_b.items()})
            width, height = ws + wb, max(hs + 1, hb)
        local[v] = (pts, width, height)
    pts, _, height = local[t.root]  # type: ignore[index]
    return {v: LatticePoint(x, height - 1 - y) for v, (x, y) in pts.items()}
