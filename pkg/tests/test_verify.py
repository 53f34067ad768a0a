import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridtree.geometry import LatticePoint
from gridtree.perfect import embed_perfect
from gridtree.tree import RootedOrderedTree, parse_tree, perfect_binary_tree
from gridtree.verify import (
    ALL_CHECKS,
    EmbeddingFormatError,
    GridDims,
    MissingPositionError,
    dims_of,
    format_embedding,
    occupancy,
    parse_embedding,
    planar_conflicts_bucketed,
    planar_conflicts_naive,
    translate,
    verify,
)
from oracles import planar_oracle
from test_tree import random_tree

T1 = perfect_binary_tree(1)
T1_DRAWING = {0: LatticePoint(2, 1), 1: LatticePoint(1, 2), 2: LatticePoint(2, 2)}


def random_drawing(seed: int, n: int, side: int = 6):
    rng = random.Random(seed)
    t = random_tree(rng, n)
    cells = rng.sample([(x, y) for x in range(side) for y in range(side)], n)
    return t, {v: LatticePoint(*cells[v]) for v in range(n)}


@pytest.mark.parametrize(
    "points,expected",
    [([(0, 0)], (1, 1)), ([(1, 2), (2, 1), (2, 2)], (2, 2)), ([(0, 0), (4, 1)], (5, 2))],
)
def test_dims_of(points, expected):
    d = dims_of(dict(enumerate(points)))
    assert (d.width, d.height) == expected


def test_dims_of_empty():
    with pytest.raises(ValueError):
        dims_of({})


def test_base_drawing_examples():
    assert verify(T1, T1_DRAWING, GridDims(2, 2), {"injective", "bounds", "planar"}).passed
    report = verify(T1, T1_DRAWING, GridDims(2, 2), {"upward"})
    assert not report.passed and report.failed() == ["upward"]
    two = RootedOrderedTree.from_children([(1, None), (None, None)])
    assert not verify(two, {0: (0, 0), 1: (0, 0)}, None, {"injective"}).passed


def test_missing_position():
    with pytest.raises(MissingPositionError):
        verify(T1, {0: (0, 0), 1: (1, 0)})


def test_unknown_check():
    with pytest.raises(ValueError):
        verify(T1, T1_DRAWING, None, {"colour"})


def test_bounds_translation_invariant_and_anchored():
    far = translate(T1_DRAWING, 100, -50)
    assert verify(T1, far, GridDims(2, 2), {"bounds"}).passed
    assert not verify(T1, far, GridDims(2, 2), {"bounds"}, anchor=(1, 1)).passed
    assert verify(T1, T1_DRAWING, GridDims(2, 2), {"bounds"}, anchor=(1, 1)).passed
    assert not verify(T1, T1_DRAWING, GridDims(1, 2), {"bounds"}).passed


def test_occupancy_examples():
    assert occupancy(T1_DRAWING, GridDims(2, 2)) == [(1, 1)]
    assert occupancy({0: (5, 5)}, GridDims(1, 1)) == []
    with pytest.raises(ValueError):
        occupancy(T1_DRAWING, GridDims(1, 2))


def test_occupancy_row_major():
    assert occupancy({0: (0, 0)}, GridDims(2, 2)) == [(1, 0), (0, 1), (1, 1)]


def test_edge_through_vertex():
    path = parse_tree("(0 (1 (2 . .) .) .)")
    e = {0: (0, 2), 1: (0, 0), 2: (0, 1)}
    report = verify(path, e, None, {"planar", "edge_through_vertex"})
    assert not report["edge_through_vertex"].passed
    # an edge may pass over an unused lattice point
    assert verify(path, {0: (0, 4), 1: (0, 2), 2: (1, 0)}, None, {"edge_through_vertex"}).passed


def test_rotation_convention():
    # parent above, left child to the lower left, right child to the lower right
    t = parse_tree("(0 (1 (2 . .) (3 . .)) .)")
    good = {0: (1, 3), 1: (1, 2), 2: (0, 1), 3: (2, 1)}
    assert verify(t, good, None, {"rotation"}).passed
    swapped = {**good, 2: (2, 1), 3: (0, 1)}
    assert not verify(t, swapped, None, {"rotation"}).passed


def test_report_render():
    text = verify(T1, T1_DRAWING, GridDims(2, 2), {"injective", "upward"}).render()
    lines = text.splitlines()
    assert lines[0] == "injective: pass"
    assert lines[1].startswith("upward: fail ")


def test_embedding_format_round_trip():
    text = format_embedding(T1_DRAWING)
    assert text == "embedding v1\n0 2 1\n1 1 2\n2 2 2\n"
    assert parse_embedding(text) == T1_DRAWING


@pytest.mark.parametrize("text", ["", "embedding v2\n", "embedding v1\n0 1\n", "embedding v1\n0 a 1\n", "embedding v1\n0 1 1\n0 2 2\n"])
def test_embedding_format_errors(text):
    with pytest.raises(EmbeddingFormatError):
        parse_embedding(text)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 10))
def test_planar_matches_oracle(seed, n):
    t, e = random_drawing(seed, n)
    assert verify(t, e, None, {"planar"}).passed == planar_oracle(t, e)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 30))
def test_naive_and_bucket_agree(seed, n):
    t, e = random_drawing(seed, n, side=8)
    assert planar_conflicts_naive(t, e) == planar_conflicts_bucketed(t, e, cell=3)


def test_naive_and_bucket_agree_large():
    t, e = embed_perfect(9)
    assert planar_conflicts_naive(t, e) == planar_conflicts_bucketed(t, e) == []
    moved = dict(e)
    moved[5] = LatticePoint(moved[5][0] + 3, moved[5][1] + 7)
    bad = planar_conflicts_naive(t, moved)
    assert bad and bad == planar_conflicts_bucketed(t, moved)
    assert verify(t, moved, None, {"planar"}).passed is False
    assert verify(t, moved, None, {"planar"}, planarity="bucket").passed is False


def test_huge_coordinates_fall_back_to_exact_path():
    big = 1 << 40
    path = parse_tree("(0 (1 (2 . .) .) .)")
    e = {0: (0, 0), 1: (big, big), 2: (big, 0)}
    assert verify(path, e, None, {"planar"}).passed
    e2 = {0: (0, 0), 1: (big, big), 2: (big // 2, big // 2 + 1)}
    assert verify(path, e2, None, {"planar"}).passed
    star = parse_tree("(0 (1 . .) (2 . .))")
    assert not verify(star, {0: (0, 0), 1: (big, big), 2: (2 * big, 2 * big)}, None, {"planar"}).passed


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 10))
def test_relabel_invariance(seed, n):
    t, e = random_drawing(seed, n)
    perm = list(range(n))
    random.Random(seed).shuffle(perm)
    u = t.relabeled(perm)
    f = {perm[v]: p for v, p in e.items()}
    flags = set(ALL_CHECKS)
    a = verify(t, e, GridDims(6, 6), flags)
    b = verify(u, f, GridDims(6, 6), flags)
    assert {c: a[c].passed for c in flags} == {c: b[c].passed for c in flags}


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 9))
def test_upward_implies_weakly_upward(seed, n):
    t, e = random_drawing(seed, n, side=3)
    r = verify(t, e, None, {"upward", "weakly_upward"})
    if r["upward"].passed:
        assert r["weakly_upward"].passed


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 10), st.integers(-50, 50), st.integers(-50, 50))
def test_rotation_translation_invariant(seed, n, dx, dy):
    t, e = random_drawing(seed, n)
    assert verify(t, e, None, {"rotation"}).passed == verify(t, translate(e, dx, dy), None, {"rotation"}).passed


def _rotation_oracle(t, e) -> bool:
    """Circular counterclockwise order by floating angle; only used on
    drawings whose edge directions at each vertex are pairwise distinct."""
    for v in range(t.size):
        seq = [u for u in (t.parent[v], *t.children[v]) if u is not None]
        if len(seq) < 3:
            continue
        ang = {u: math.atan2(e[u][1] - e[v][1], e[u][0] - e[v][0]) for u in seq}
        ccw = sorted(seq, key=ang.get)
        k = ccw.index(seq[0])
        if ccw[k:] + ccw[:k] != seq:
            return False
    return True


def _distinct_directions(t, e) -> bool:
    for v in range(t.size):
        dirs = []
        for u in (t.parent[v], *t.children[v]):
            if u is None:
                continue
            dx, dy = e[u][0] - e[v][0], e[u][1] - e[v][1]
            g = math.gcd(dx, dy)
            dirs.append((dx // g, dy // g))
        if len(set(dirs)) != len(dirs):
            return False
    return True


@settings(max_examples=400, deadline=None)
@given(st.integers(0, 2**32), st.integers(3, 10))
def test_rotation_matches_angle_oracle(seed, n):
    t, e = random_drawing(seed, n)
    if _distinct_directions(t, e):
        assert verify(t, e, None, {"rotation"}).passed == _rotation_oracle(t, e)


def test_deterministic():
    t, e = random_drawing(7, 10)
    assert verify(t, e, GridDims(6, 6), set(ALL_CHECKS)).render() == verify(t, e, GridDims(6, 6), set(ALL_CHECKS)).render()
