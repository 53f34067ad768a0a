"""Independent reference implementations used only by the tests.

Everything here is deliberately slow and written from first principles
(Fraction arithmetic, explicit enumeration) so that it shares no code with
the package.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from gridtree.tree import RootedOrderedTree


def rational_conflict(a, b, c, d) -> bool:
    """True iff closed segments ab and cd share a point that is not an
    endpoint of both."""
    shared = {tuple(a), tuple(b)} & {tuple(c), tuple(d)}
    rx, ry = b[0] - a[0], b[1] - a[1]
    sx, sy = d[0] - c[0], d[1] - c[1]
    den = rx * sy - ry * sx
    if den != 0:
        t = Fraction((c[0] - a[0]) * sy - (c[1] - a[1]) * sx, den)
        u = Fraction((c[0] - a[0]) * ry - (c[1] - a[1]) * rx, den)
        if not (0 <= t <= 1 and 0 <= u <= 1):
            return False
        p = (a[0] + t * rx, a[1] + t * ry)
        return p not in shared
    # parallel: only collinear segments can meet
    if (c[0] - a[0]) * ry - (c[1] - a[1]) * rx != 0:
        return False
    # project onto segment ab's parameter line
    def par(p):
        return Fraction((p[0] - a[0]) * rx + (p[1] - a[1]) * ry, rx * rx + ry * ry)

    lo = max(Fraction(0), min(par(c), par(d)))
    hi = min(Fraction(1), max(par(c), par(d)))
    if lo > hi:
        return False
    if lo < hi:
        return True
    p = (a[0] + lo * rx, a[1] + lo * ry)
    return p not in shared


def planar_oracle(t: RootedOrderedTree, e) -> bool:
    edges = t.edges()
    return not any(
        rational_conflict(e[p], e[c], e[q], e[d]) for (p, c), (q, d) in combinations(edges, 2)
    )


@lru_cache(maxsize=None)
def shapes(n: int) -> tuple:
    """All binary tree shapes with n nodes as nested (left, right) tuples."""
    if n == 0:
        return (None,)
    return tuple((lt, rt) for k in range(n) for lt in shapes(k) for rt in shapes(n - 1 - k))


def shape_to_tree(s) -> RootedOrderedTree:
    children: list[list] = []

    def rec(node) -> int:
        v = len(children)
        children.append([None, None])
        for side in (0, 1):
            if node[side] is not None:
                children[v][side] = rec(node[side])
        return v

    rec(s)
    return RootedOrderedTree.from_children([tuple(c) for c in children])


def all_trees(max_nodes: int) -> list[RootedOrderedTree]:
    return [shape_to_tree(s) for n in range(1, max_nodes + 1) for s in shapes(n)]
