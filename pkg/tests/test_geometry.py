import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gridtree.geometry import (
    LatticePoint,
    Segment,
    conflict_arrays,
    lattice_points_inside,
    orientation,
    point_in_segment_interior,
    segments_conflict,
)
from oracles import rational_conflict

P = LatticePoint
coord = st.integers(-6, 6)
point = st.tuples(coord, coord)


def seg(a, b):
    return Segment(P(*a), P(*b))


@pytest.mark.parametrize(
    "p,q,r,expected",
    [((0, 0), (1, 0), (2, 0), 0), ((0, 0), (1, 0), (1, 1), 1), ((0, 0), (1, 0), (1, -1), -1)],
)
def test_orientation_examples(p, q, r, expected):
    assert orientation(P(*p), P(*q), P(*r)) == expected


def test_orientation_wide_coordinates():
    big = 1 << 30
    assert orientation((-big, -big), (big, big - 1), (big, big)) == 1
    assert orientation((-big, -big), (big, big), (0, 0)) == 0


@pytest.mark.parametrize(
    "s1,s2,expected",
    [
        (((0, 0), (2, 2)), ((0, 2), (2, 0)), True),
        (((0, 0), (1, 1)), ((1, 1), (2, 0)), False),
        (((0, 0), (2, 0)), ((1, 0), (3, 0)), True),
        (((0, 0), (2, 0)), ((1, 0), (1, 5)), True),
        (((0, 0), (1, 0)), ((1, 0), (2, 0)), False),
        (((0, 0), (2, 0)), ((2, 0), (1, 0)), True),
        (((0, 0), (2, 0)), ((0, 0), (2, 0)), True),
        (((0, 0), (1, 0)), ((0, 1), (1, 1)), False),
    ],
)
def test_segments_conflict_examples(s1, s2, expected):
    assert segments_conflict(seg(*s1), seg(*s2)) is expected


@pytest.mark.parametrize(
    "p,expected", [((1, 1), True), ((0, 0), False), ((1, 0), False), ((2, 2), False), ((3, 3), False)]
)
def test_point_in_segment_interior_examples(p, expected):
    assert point_in_segment_interior(P(*p), seg((0, 0), (2, 2))) is expected


def test_degenerate_segment_rejected():
    with pytest.raises(ValueError):
        Segment(P(1, 1), P(1, 1))


@given(point, point, point, point)
def test_conflict_symmetric(a, b, c, d):
    if a == b or c == d:
        return
    assert segments_conflict(seg(a, b), seg(c, d)) == segments_conflict(seg(c, d), seg(a, b))
    assert segments_conflict(seg(a, b), seg(c, d)) == segments_conflict(seg(b, a), seg(d, c))


@given(point, point, point)
def test_interior_implies_collinear(p, a, b):
    if a == b:
        return
    if point_in_segment_interior(p, seg(a, b)):
        assert orientation(a, b, p) == 0


@given(point, point, point, point)
def test_conflict_matches_rational_oracle(a, b, c, d):
    if a == b or c == d:
        return
    assert segments_conflict(seg(a, b), seg(c, d)) == rational_conflict(a, b, c, d)


@given(point, point)
def test_lattice_points_inside(a, b):
    if a == b:
        return
    xs, ys = range(min(a[0], b[0]), max(a[0], b[0]) + 1), range(min(a[1], b[1]), max(a[1], b[1]) + 1)
    expected = sorted(p for p in itertools.product(xs, ys) if point_in_segment_interior(p, seg(a, b)))
    assert sorted(lattice_points_inside(a, b)) == expected


def test_vectorized_matches_scalar():
    pts = list(itertools.product(range(4), repeat=2))
    segs = [(a, b) for a, b in itertools.combinations(pts, 2)]
    arr = np.array(segs)
    got = conflict_arrays(arr[:, None, 0], arr[:, None, 1], arr[None, :, 0], arr[None, :, 1])
    for i, (a, b) in enumerate(segs):
        for j, (c, d) in enumerate(segs):
            assert got[i, j] == segments_conflict(seg(a, b), seg(c, d))
