import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridtree.reduction import (
    LITERAL_DELTA,
    Assignment,
    CnfError,
    CnfFormula,
    DecodeError,
    ReductionOutput,
    UnsatisfiedError,
    brute_force_sat,
    decode_assignment,
    encode_embedding,
    format_meta,
    grid_size,
    literal_vertex,
    parse_dimacs,
    parse_meta,
    printed_grid_size,
    reduce,
)
from gridtree.tree import validate_binary
from gridtree.verify import verify

FORWARD_FLAGS = {"injective", "bounds", "planar", "upward", "rotation", "edge_through_vertex"}


def random_formula(rng: random.Random, n: int, m: int) -> CnfFormula:
    clauses = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), 3)
        clauses.append(tuple((v, rng.random() < 0.5) for v in vs))
    return CnfFormula(n, tuple(clauses))


def satisfying(f: CnfFormula):
    for bits in itertools.product((False, True), repeat=f.n):
        if f.satisfied_by(bits):
            yield Assignment(bits)


def below_top(r: ReductionOutput) -> tuple[int, int, int]:
    """(subtrees, rows needed, vertices below the top tree) from a plain walk
    over the tree's vertex labels, ignoring the recorded bookkeeping."""
    t = r.tree
    depth = {t.root: 0}
    queue = [t.root]
    for v in queue:
        for c in t.kids(v):
            depth[c] = depth[v] + 1
            queue.append(c)

    def top(v):
        return t.label(v).tag == "TopTree"

    roots = sum(1 for v in queue if not top(v) and top(t.parent[v]))
    deep = sum(1 for v in queue if not top(v))
    return roots, max(depth.values()) + 1, deep


def test_parse_dimacs_examples():
    f = parse_dimacs("p cnf 3 1\n1 -2 3 0")
    assert f.n == 3 and f.m == 1 and f.clauses == (((1, True), (2, False), (3, True)),)
    with pytest.raises(CnfError, match="repeats"):
        parse_dimacs("p cnf 2 1\n1 -1 2 0")
    with pytest.raises(CnfError, match="literals"):
        parse_dimacs("p cnf 3 1\n1 2 0")


@pytest.mark.parametrize(
    "text",
    ["1 2 3 0", "p cnf 3 2\n1 2 3 0", "p cnf 3 1\n1 2 4 0", "p cnf 3 1\n1 2 3", "p cnf x 1\n", "p cnf 3 1\n1 a 3 0"],
)
def test_parse_dimacs_errors(text):
    with pytest.raises(CnfError):
        parse_dimacs(text)


def test_parse_dimacs_sorts_and_skips_comments():
    f = parse_dimacs("c hello\np cnf 4 2\n3 -1 2 0 -4\n2 1 0\n")
    assert f.clauses == (((1, False), (2, True), (3, True)), ((1, True), (2, True), (4, False)))
    assert parse_dimacs(f.to_dimacs()) == f


def test_brute_force_examples():
    assert brute_force_sat(parse_dimacs("p cnf 3 1\n1 2 3 0")) is not None
    every = [tuple((v, s) for v, s in zip((1, 2, 3), signs)) for signs in itertools.product((True, False), repeat=3)]
    assert brute_force_sat(CnfFormula(3, tuple(every))) is None
    a = brute_force_sat(parse_dimacs("p cnf 3 1\n-1 -2 -3 0"))
    assert a is not None and not all(a.values)


def test_brute_force_cap():
    with pytest.raises(ValueError):
        brute_force_sat(CnfFormula(25, ()))


def test_assignment_parse():
    a = Assignment.parse("1,0,1")
    assert (a[1], a[2], a[3]) == (True, False, True) and a.format() == "1,0,1"
    for bad in ("1,2", "1;0"):
        with pytest.raises(ValueError):
            Assignment.parse(bad)


def test_printed_dimension_examples():
    assert printed_grid_size(3, 1) == (8, 23)
    assert printed_grid_size(4, 4) == (20, 42)
    assert grid_size(4, 4) == (20, 42)


@pytest.mark.parametrize("n,m", [(n, m) for n in range(1, 6) for m in range(0, 5) if not (m and n < 3)])
def test_structure(n, m):
    f = random_formula(random.Random(n * 10 + m), n, m)
    r = reduce(f)
    w, h = grid_size(n, m)
    assert (r.w, r.h) == (w, h)
    assert validate_binary(r.tree).passed
    assert all(len(r.tree.kids(v)) + (r.tree.parent[v] is not None) <= 3 for v in range(r.tree.size))
    depths = r.tree.depths()
    assert len(r.subtree_roots) == w == 4 * n + 4
    assert {depths[s] for s in r.subtree_roots} == {r.top_levels}
    assert r.tree.size - len(r.top_nodes) == (5 * n + 4 * m + 1) * (4 * n + 4)
    assert below_top(r) == (4 * n + 4, h, (5 * n + 4 * m + 1) * (4 * n + 4))
    if n == m:
        assert (w, h) == printed_grid_size(n, m)
    for (i, j), leaf in r.lit.items():
        path = r.pt[i] if f.clauses[j - 1][[v for v, _ in f.clauses[j - 1]].index(i)][1] else r.pf[i]
        steps, v = 1, r.tree.parent[leaf]
        while v != path:
            v = r.tree.parent[v]
            steps += 1
        assert steps == literal_vertex(n, i, j)


def test_single_clause_example():
    f = parse_dimacs("p cnf 3 1\n1 2 3 0")
    r = reduce(f)
    e = encode_embedding(r, Assignment((True, True, True)))
    assert verify(r.tree, e, r.dims, FORWARD_FLAGS, anchor=(0, 0)).passed
    assert {(x, y) for x, y in e.values() if y <= 19} == {(x, y) for x in range(r.w) for y in range(20)}
    with pytest.raises(UnsatisfiedError):
        encode_embedding(r, Assignment((False, False, False)))
    with pytest.raises(ValueError):
        encode_embedding(r, Assignment((True, True)))


def check_forward(f: CnfFormula, a: Assignment) -> None:
    r = reduce(f)
    e = encode_embedding(r, a)
    report = verify(r.tree, e, r.dims, FORWARD_FLAGS, anchor=(0, 0))
    assert report.passed, report.render()
    big_n = 5 * f.n + 4 * f.m
    assert {(x, y) for x, y in e.values() if y <= big_n} == {(x, y) for x in range(r.w) for y in range(big_n + 1)}
    for (i, j), leaf in r.lit.items():
        assert e[leaf][1] - 4 * (f.m - j) in (1, 2, 3)
    back = decode_assignment(r, e)
    assert back == a and f.satisfied_by(back.values)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 5), st.integers(1, 4), st.integers(0, 2**32))
def test_forward_random(n, m, seed):
    rng = random.Random(seed)
    f = random_formula(rng, n, m)
    sols = list(satisfying(f))
    for a in rng.sample(sols, min(3, len(sols))):
        check_forward(f, a)


def test_forward_every_assignment_small():
    f = parse_dimacs("p cnf 3 2\n1 -2 3 0\n-1 2 -3 0")
    sols = list(satisfying(f))
    assert len(sols) == 6
    for a in sols:
        check_forward(f, a)


@pytest.mark.parametrize("delta", [-1, 1])
def test_other_literal_offsets_fail(delta):
    f = parse_dimacs("p cnf 3 1\n1 2 3 0")
    r = reduce(f, delta)
    try:
        e = encode_embedding(r, Assignment((True, True, True)))
    except AssertionError:
        return
    assert not verify(r.tree, e, r.dims, FORWARD_FLAGS, anchor=(0, 0)).passed


def test_literal_delta_default():
    assert LITERAL_DELTA == 0


def test_decode_degenerate_and_direct():
    f = CnfFormula(1, ())
    r = reduce(f)
    e = encode_embedding(r, Assignment((True,)))
    assert e[r.pt[1]][1] > e[r.pf[1]][1]
    assert decode_assignment(r, e) == Assignment((True,))
    flat = dict(e)
    flat[r.pf[1]] = (flat[r.pf[1]][0], flat[r.pt[1]][1])
    with pytest.raises(DecodeError):
        decode_assignment(r, flat)
    del flat[r.pt[1]]
    with pytest.raises(DecodeError):
        decode_assignment(r, flat)


def test_meta_round_trip():
    f = parse_dimacs("p cnf 4 2\n1 -2 3 0\n-1 2 4 0")
    r = reduce(f)
    text = format_meta(r)
    lines = text.splitlines()
    assert lines[0] == f"dims {r.w} {r.h}"
    assert lines[-1] == "delta 0"
    back = parse_meta(text)
    assert back.formula == f and back.tree.same_shape(r.tree) and back.lit == r.lit
    tampered = text.replace(f"pt 1 {r.pt[1]}", f"pt 1 {r.pt[1] + 1}")
    with pytest.raises(ValueError):
        parse_meta(tampered)
    with pytest.raises(ValueError):
        parse_meta("dims 8 9\n")
