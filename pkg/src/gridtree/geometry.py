"""Exact integer predicates on lattice points and segments.

Python integers are unbounded, so every product below is exact regardless
of coordinate magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import NamedTuple

import numpy as np


class LatticePoint(NamedTuple):
    x: int
    y: int


Point = tuple[int, int]


@dataclass(frozen=True)
class Segment:
    a: LatticePoint
    b: LatticePoint

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", LatticePoint(*self.a))
        object.__setattr__(self, "b", LatticePoint(*self.b))
        if self.a == self.b:
            raise ValueError(f"degenerate segment at {tuple(self.a)}")


def cross(p: Point, q: Point, r: Point) -> int:
    """Twice the signed area of triangle pqr, i.e. (q - p) x (r - p)."""
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def orientation(p: Point, q: Point, r: Point) -> int:
    """+1 for a counterclockwise turn p->q->r, -1 for clockwise, 0 if collinear."""
    c = cross(p, q, r)
    return (c > 0) - (c < 0)


def _strictly_inside(p: Point, a: Point, b: Point) -> bool:
    if cross(a, b, p) != 0:
        return False
    # collinear: p strictly between a and b iff the projections separate
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
        and p != a
        and p != b
        and tuple(a) != tuple(b)
    )


def point_in_segment_interior(p: Point, s: Segment | tuple[Point, Point]) -> bool:
    """True iff ``p`` lies on ``s`` strictly between its endpoints."""
    a, b = (s.a, s.b) if isinstance(s, Segment) else s
    return _strictly_inside(tuple(p), tuple(a), tuple(b))


def _conflict(a: Point, b: Point, c: Point, d: Point) -> bool:
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if {a, b} == {c, d}:
        return True
    # any remaining contact puts an endpoint of one segment inside the other
    return (
        (o1 == 0 and _strictly_inside(c, a, b))
        or (o2 == 0 and _strictly_inside(d, a, b))
        or (o3 == 0 and _strictly_inside(a, c, d))
        or (o4 == 0 and _strictly_inside(b, c, d))
    )


def segments_conflict(
    s1: Segment | tuple[Point, Point], s2: Segment | tuple[Point, Point]
) -> bool:
    """True iff the closed segments meet anywhere other than a shared endpoint.

    Collinear overlap of positive length and T-junctions both count as
    conflicts.
    """
    a, b = (s1.a, s1.b) if isinstance(s1, Segment) else s1
    c, d = (s2.a, s2.b) if isinstance(s2, Segment) else s2
    return _conflict(tuple(a), tuple(b), tuple(c), tuple(d))


def lattice_points_inside(a: Point, b: Point) -> list[tuple[int, int]]:
    """Lattice points strictly between ``a`` and ``b`` on segment ab."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    g = gcd(dx, dy)
    if g <= 1:
        return []
    sx, sy = dx // g, dy // g
    return [(a[0] + t * sx, a[1] + t * sy) for t in range(1, g)]


# --- vectorised variants over int arrays of shape (..., 2) -----------------

SAFE_COORD = 1 << 30


def _sign(v):
    return (v > 0).astype(np.int8) - (v < 0).astype(np.int8)


def _inside_xy(px, py, ax, ay, bx, by, collinear):
    return (
        collinear
        & (np.minimum(ax, bx) <= px)
        & (px <= np.maximum(ax, bx))
        & (np.minimum(ay, by) <= py)
        & (py <= np.maximum(ay, by))
        & ((px != ax) | (py != ay))
        & ((px != bx) | (py != by))
    )


def conflict_xy(ax, ay, bx, by, cx, cy, dx, dy):
    """Elementwise :func:`segments_conflict` on separate coordinate arrays."""
    ux, uy = bx - ax, by - ay
    vx, vy = dx - cx, dy - cy
    o1 = _sign(ux * (cy - ay) - uy * (cx - ax))
    o2 = _sign(ux * (dy - ay) - uy * (dx - ax))
    o3 = _sign(vx * (ay - cy) - vy * (ax - cx))
    o4 = _sign(vx * (by - cy) - vy * (bx - cx))
    proper = (o1 * o2 < 0) & (o3 * o4 < 0)
    same = ((ax == cx) & (ay == cy) & (bx == dx) & (by == dy)) | (
        (ax == dx) & (ay == dy) & (bx == cx) & (by == cy)
    )
    return (
        proper
        | same
        | _inside_xy(cx, cy, ax, ay, bx, by, o1 == 0)
        | _inside_xy(dx, dy, ax, ay, bx, by, o2 == 0)
        | _inside_xy(ax, ay, cx, cy, dx, dy, o3 == 0)
        | _inside_xy(bx, by, cx, cy, dx, dy, o4 == 0)
    )


def conflict_arrays(a, b, c, d):
    """Elementwise :func:`segments_conflict` for broadcastable point arrays.

    Inputs are integer arrays with a trailing axis of length 2.  int64 is
    exact while every coordinate magnitude is below ``SAFE_COORD``.
    """
    a, b, c, d = (np.asarray(z) for z in (a, b, c, d))
    return conflict_xy(a[..., 0], a[..., 1], b[..., 0], b[..., 1], c[..., 0], c[..., 1], d[..., 0], d[..., 1])
