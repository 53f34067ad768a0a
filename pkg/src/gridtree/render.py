"""Deterministic SVG output for grid drawings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from gridtree.tree import RootedOrderedTree

RED_TAGS = {"PT", "PF", "PathExtra", "LiteralLeaf"}
BLUE_TAGS = {"BlueSpine", "BlueClauseLeaf", "LastSubtreeSpine", "VarBumpLeaf"}


@dataclass(frozen=True)
class SvgStyle:
    scale: int = 20
    margin: int = 20
    radius: int = 4
    lattice: bool = True
    roles: bool = True


def role_class(t: RootedOrderedTree, v: int) -> Optional[str]:
    role = t.label(v)
    if role is None:
        return None
    if role.tag in RED_TAGS or (role.tag == "VarSpine" and role.args[1] == 3):
        return "red"
    if role.tag in BLUE_TAGS:
        return "blue"
    return None


def render_svg(
    t: RootedOrderedTree, e: Mapping[int, tuple[int, int]], style: SvgStyle = SvgStyle()
) -> str:
    """One circle per vertex, one line per edge; y is flipped so that larger
    grid y is drawn higher."""
    xs = [p[0] for p in e.values()]
    ys = [p[1] for p in e.values()]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    s, mg = style.scale, style.margin
    width = (x1 - x0) * s + 2 * mg
    height = (y1 - y0) * s + 2 * mg

    def sx(x: int) -> int:
        return mg + (x - x0) * s

    def sy(y: int) -> int:
        return mg + (y1 - y) * s

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "<style>.edge{stroke:#000;stroke-width:1.5}.node{fill:#000}.free{fill:#bbb}"
        ".red{stroke:#c00;fill:#c00}.blue{stroke:#00c;fill:#00c}</style>",
    ]
    if style.lattice:
        used = {tuple(p) for p in e.values()}
        for y in range(y1, y0 - 1, -1):
            for x in range(x0, x1 + 1):
                if (x, y) not in used:
                    out.append(f'<circle class="free" cx="{sx(x)}" cy="{sy(y)}" r="1.5"/>')
    for p, c in t.edges():
        cls = "edge"
        extra = role_class(t, c) if style.roles else None
        if extra:
            cls += f" {extra}"
        (ax, ay), (bx, by) = e[p], e[c]
        out.append(f'<line class="{cls}" x1="{sx(ax)}" y1="{sy(ay)}" x2="{sx(bx)}" y2="{sy(by)}"/>')
    for v in sorted(e):
        cls = "node"
        extra = role_class(t, v) if style.roles else None
        if extra:
            cls += f" {extra}"
        x, y = e[v]
        out.append(f'<circle class="{cls}" cx="{sx(x)}" cy="{sy(y)}" r="{style.radius}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
