"""Certificate checks for straight-line grid drawings of rooted trees.

An embedding is a mapping ``node id -> (x, y)``.  Larger ``y`` is higher,
so "upward" means every parent sits strictly above its children.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

import numpy as np

from gridtree.geometry import (
    SAFE_COORD,
    LatticePoint,
    conflict_arrays,
    conflict_xy,
    lattice_points_inside,
    segments_conflict,
)
from gridtree.report import VerifyReport
from gridtree.tree import RootedOrderedTree

GridEmbedding = dict[int, LatticePoint]

ALL_CHECKS = (
    "injective",
    "bounds",
    "planar",
    "upward",
    "weakly_upward",
    "rotation",
    "edge_through_vertex",
    "occupancy",
)
DEFAULT_CHECKS = frozenset({"injective", "bounds", "planar", "edge_through_vertex"})

# pairs above this edge count go through the bucketing accelerator when the
# caller asks for ``planarity="auto"``
BUCKET_THRESHOLD = 2000


class MissingPositionError(ValueError):
    pass


class EmbeddingFormatError(ValueError):
    pass


@dataclass(frozen=True)
class GridDims:
    width: int
    height: int

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError(f"grid dimensions must be positive, got {self.width}x{self.height}")

    @property
    def cells(self) -> int:
        return self.width * self.height


def dims_of(e: Mapping[int, tuple[int, int]] | Iterable[tuple[int, int]]) -> GridDims:
    pts = list(e.values()) if isinstance(e, Mapping) else list(e)
    if not pts:
        raise ValueError("empty embedding has no dimensions")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return GridDims(max(xs) - min(xs) + 1, max(ys) - min(ys) + 1)


def _min_corner(e: Mapping[int, tuple[int, int]]) -> tuple[int, int]:
    return min(p[0] for p in e.values()), min(p[1] for p in e.values())


def occupancy(
    e: Mapping[int, tuple[int, int]],
    dims: GridDims,
    anchor: Optional[tuple[int, int]] = None,
) -> list[LatticePoint]:
    """Unused points of the ``dims`` grid, ordered by y then x.

    The grid is anchored at the embedding's minimum corner unless ``anchor``
    pins its bottom-left point.
    """
    if not e:
        raise ValueError("empty embedding")
    x0, y0 = anchor if anchor is not None else _min_corner(e)
    used = {tuple(p) for p in e.values()}
    for p in used:
        if not (x0 <= p[0] < x0 + dims.width and y0 <= p[1] < y0 + dims.height):
            raise ValueError(f"point {p} lies outside the {dims.width}x{dims.height} grid")
    return [
        LatticePoint(x, y)
        for y in range(y0, y0 + dims.height)
        for x in range(x0, x0 + dims.width)
        if (x, y) not in used
    ]


# --- planarity --------------------------------------------------------------


def _edge_arrays(t: RootedOrderedTree, e: Mapping[int, tuple[int, int]]):
    edges = t.edges()
    pts = np.array([[e[p], e[c]] for p, c in edges], dtype=np.int64).reshape(-1, 2, 2)
    return edges, pts


def planar_conflicts_naive(
    t: RootedOrderedTree, e: Mapping[int, tuple[int, int]], limit: Optional[int] = None, block: int = 128
) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Conflicting edge pairs, testing every pair with the exact predicate.

    Pairs are (i, j) with i < j over edge indices in preorder; with ``limit``
    the scan stops after that many conflicts.
    """
    edges, pts = _edge_arrays(t, e)
    m = len(edges)
    if m < 2:
        return []
    if np.abs(pts).max() >= SAFE_COORD:
        return _conflicts_scalar(edges, pts.tolist(), limit)
    ax, ay, bx, by = pts[:, 0, 0], pts[:, 0, 1], pts[:, 1, 0], pts[:, 1, 1]
    found: list[tuple[tuple[int, int], tuple[int, int]]] = []
    for lo in range(0, m - 1, block):
        hi = min(lo + block, m)
        # pairs inside the block (upper triangle), then the block against all later edges
        ti, tj = np.triu_indices(hi - lo, 1)
        ti, tj = ti + lo, tj + lo
        hit = conflict_xy(ax[ti], ay[ti], bx[ti], by[ti], ax[tj], ay[tj], bx[tj], by[tj])
        ii, jj = [ti[hit]], [tj[hit]]
        if hi < m:
            r, c = slice(lo, hi), slice(hi, m)
            hit = conflict_xy(
                ax[r, None], ay[r, None], bx[r, None], by[r, None],
                ax[None, c], ay[None, c], bx[None, c], by[None, c],
            )
            rows, cols = np.nonzero(hit)
            ii.append(rows + lo)
            jj.append(cols + hi)
        i_all, j_all = np.concatenate(ii), np.concatenate(jj)
        order = np.lexsort((j_all, i_all))
        for i, j in zip(i_all[order].tolist(), j_all[order].tolist()):
            found.append((edges[i], edges[j]))
            if limit is not None and len(found) >= limit:
                return found
    return found


def _conflicts_scalar(edges, pts, limit, pairs=None):
    found = []
    it = pairs if pairs is not None else ((i, j) for i in range(len(edges)) for j in range(i + 1, len(edges)))
    for i, j in it:
        if segments_conflict(tuple(map(tuple, pts[i])), tuple(map(tuple, pts[j]))):
            found.append((edges[i], edges[j]))
            if limit is not None and len(found) >= limit:
                break
    return found


def planar_conflicts_bucketed(
    t: RootedOrderedTree, e: Mapping[int, tuple[int, int]], limit: Optional[int] = None, cell: int = 8
) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Same result as :func:`planar_conflicts_naive`, testing only edge pairs
    whose bounding boxes share a bucket of a uniform ``cell``-sized grid."""
    edges, pts = _edge_arrays(t, e)
    if len(edges) < 2:
        return []
    buckets: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i, ((ax, ay), (bx, by)) in enumerate(pts.tolist()):
        for gx in range(min(ax, bx) // cell, max(ax, bx) // cell + 1):
            for gy in range(min(ay, by) // cell, max(ay, by) // cell + 1):
                buckets[gx, gy].append(i)
    pairs = set()
    for members in buckets.values():
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                pairs.add((members[x], members[y]))
    if not pairs:
        return []
    ordered = sorted(pairs)
    idx = np.array(ordered, dtype=np.int64)
    if np.abs(pts).max() >= SAFE_COORD:
        return _conflicts_scalar(edges, pts.tolist(), limit, ordered)
    hit = conflict_arrays(pts[idx[:, 0], 0], pts[idx[:, 0], 1], pts[idx[:, 1], 0], pts[idx[:, 1], 1])
    found = [(edges[i], edges[j]) for i, j in idx[hit].tolist()]
    return found[:limit] if limit is not None else found


# --- rotation ---------------------------------------------------------------


def _half(ref: tuple[int, int], d: tuple[int, int]) -> int:
    """0 for d along ref, 1 for the open CCW half-turn, 2 opposite, 3 beyond."""
    c = ref[0] * d[1] - ref[1] * d[0]
    if c > 0:
        return 1
    if c < 0:
        return 3
    return 0 if ref[0] * d[0] + ref[1] * d[1] > 0 else 2


def ccw_before(ref: tuple[int, int], a: tuple[int, int], b: tuple[int, int]) -> Optional[bool]:
    """Whether direction ``a`` is reached before ``b`` sweeping CCW from
    ``ref``.  ``None`` when the sweep cannot separate them (equal direction
    or one of them along ``ref``)."""
    ha, hb = _half(ref, a), _half(ref, b)
    if ha == 0 or hb == 0:
        return None
    if ha != hb:
        return ha < hb
    c = a[0] * b[1] - a[1] * b[0]
    if c == 0:
        return None
    return c > 0


def rotation_ok(
    pos: tuple[int, int], parent: tuple[int, int], left: tuple[int, int], right: tuple[int, int]
) -> bool:
    """CCW circular order around ``pos`` is (parent, left, right)."""
    ref = (parent[0] - pos[0], parent[1] - pos[1])
    dl = (left[0] - pos[0], left[1] - pos[1])
    dr = (right[0] - pos[0], right[1] - pos[1])
    return ccw_before(ref, dl, dr) is True


def rotation_violations(t: RootedOrderedTree, e: Mapping[int, tuple[int, int]]) -> list[int]:
    bad = []
    for v in t.preorder():
        p = t.parent[v]
        left, right = t.children[v]
        if p is None or left is None or right is None:
            continue
        if not rotation_ok(e[v], e[p], e[left], e[right]):
            bad.append(v)
    return bad


# --- main entry -------------------------------------------------------------


def verify(
    t: RootedOrderedTree,
    e: Mapping[int, tuple[int, int]],
    dims: Optional[GridDims] = None,
    flags: Optional[Iterable[str]] = None,
    anchor: Optional[tuple[int, int]] = None,
    planarity: str = "naive",
) -> VerifyReport:
    """Run the requested checks and report each one.

    ``bounds`` compares only the bounding box unless ``anchor`` fixes the
    bottom-left grid point.  ``planarity`` is ``"naive"`` (all pairs),
    ``"bucket"`` or ``"auto"`` (bucketing above ``BUCKET_THRESHOLD`` edges).
    """
    wanted = set(DEFAULT_CHECKS if flags is None else flags)
    unknown = wanted - set(ALL_CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    if dims is None:
        wanted -= {"bounds", "occupancy"}
    missing = [v for v in range(len(t)) if v not in e]
    if missing:
        raise MissingPositionError(f"no position for nodes {missing[:10]}")
    report = VerifyReport()
    order = [c for c in ALL_CHECKS if c in wanted]
    edges = t.edges()
    for check in order:
        if check == "injective":
            seen: dict[tuple[int, int], int] = {}
            clashes = []
            for v in range(len(t)):
                p = tuple(e[v])
                if p in seen:
                    clashes.append(f"{seen[p]},{v}@{p[0]},{p[1]}")
                else:
                    seen[p] = v
            report.add(check, not clashes, " ".join(clashes[:5]))
        elif check == "bounds":
            assert dims is not None
            if anchor is None:
                got = dims_of(e)
                ok = got.width <= dims.width and got.height <= dims.height
                report.add(check, ok, "" if ok else f"needs {got.width}x{got.height}")
            else:
                x0, y0 = anchor
                out = [
                    v
                    for v in range(len(t))
                    if not (x0 <= e[v][0] < x0 + dims.width and y0 <= e[v][1] < y0 + dims.height)
                ]
                report.add(check, not out, " ".join(map(str, out[:5])))
        elif check == "planar":
            use_bucket = planarity == "bucket" or (planarity == "auto" and len(edges) > BUCKET_THRESHOLD)
            finder = planar_conflicts_bucketed if use_bucket else planar_conflicts_naive
            bad = finder(t, e, limit=5)
            detail = " ".join(f"{a[0]}-{a[1]}x{b[0]}-{b[1]}" for a, b in bad)
            report.add(check, not bad, detail)
        elif check in ("upward", "weakly_upward"):
            strict = check == "upward"
            bad_edges = [
                (p, c) for p, c in edges if not (e[p][1] > e[c][1] if strict else e[p][1] >= e[c][1])
            ]
            report.add(check, not bad_edges, " ".join(f"{p}-{c}" for p, c in bad_edges[:5]))
        elif check == "rotation":
            bad = rotation_violations(t, e)
            report.add(check, not bad, " ".join(map(str, bad[:5])))
        elif check == "edge_through_vertex":
            where = {tuple(e[v]): v for v in range(len(t))}
            hits = []
            for p, c in edges:
                for q in lattice_points_inside(e[p], e[c]):
                    if q in where:
                        hits.append(f"{p}-{c}@{where[q]}")
            report.add(check, not hits, " ".join(hits[:5]))
        elif check == "occupancy":
            assert dims is not None
            try:
                free = occupancy(e, dims, anchor)
            except ValueError as exc:
                report.add(check, False, str(exc))
            else:
                report.add(check, not free, " ".join(f"{x},{y}" for x, y in free[:5]))
    return report


# --- file format ------------------------------------------------------------

EMBEDDING_HEADER = "embedding v1"


def format_embedding(e: Mapping[int, tuple[int, int]]) -> str:
    lines = [EMBEDDING_HEADER]
    lines.extend(f"{v} {e[v][0]} {e[v][1]}" for v in sorted(e))
    return "\n".join(lines) + "\n"


def parse_embedding(text: str) -> GridEmbedding:
    lines = text.splitlines()
    if not lines or lines[0].strip() != EMBEDDING_HEADER:
        raise EmbeddingFormatError(f"expected header {EMBEDDING_HEADER!r}")
    out: GridEmbedding = {}
    for num, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3:
            raise EmbeddingFormatError(f"line {num}: expected '<id> <x> <y>'")
        try:
            v, x, y = (int(s) for s in parts)
        except ValueError as exc:
            raise EmbeddingFormatError(f"line {num}: {exc}") from None
        if v in out:
            raise EmbeddingFormatError(f"line {num}: duplicate node {v}")
        out[v] = LatticePoint(x, y)
    return out


def translate(e: Mapping[int, tuple[int, int]], dx: int, dy: int) -> GridEmbedding:
    return {v: LatticePoint(p[0] + dx, p[1] + dy) for v, p in e.items()}
