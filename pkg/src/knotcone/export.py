"""Static diagrams of complexes: SVG (dots, segments, labels) and Graphviz dot."""

from __future__ import annotations

from collections import deque
from xml.sax.saxutils import escape

from .algebra import ComplexUV
from .filtered import FilteredComplex

Point = tuple[float, float]


def layout(c: ComplexUV | FilteredComplex) -> tuple[dict[str, Point], list[tuple[str, str, str]]]:
    """Plane positions and labelled edges.

    A two-variable complex is drawn on the lattice of U and V actions, at
    (-gr_U/2, -gr_V/2). A filtered complex is drawn in the (i, j) plane; each
    connected piece is shifted by powers of U so that every drawn edge ends
    at the translate U^c y it actually hits.
    """
    if isinstance(c, ComplexUV):
        pos = {g.id: (-g.gr_u / 2, -g.gr_v / 2) for g in c.generators}
        edges = [(x, y, _mono(u, v)) for x, y, u, v in c.edges()]
        return pos, edges
    power: dict[str, int] = {}
    nb: dict[str, list] = {g: [] for g in c.gens}
    for x, y, k in c.terms():
        nb[x].append((y, k))
        nb[y].append((x, -k))
    for root in c.gens:
        if root in power:
            continue
        power[root] = 0
        todo = deque([root])
        while todo:
            x = todo.popleft()
            for y, k in nb[x]:
                if y not in power:
                    power[y] = power[x] + k
                    todo.append(y)
    pos = {}
    for g in c.gens.values():
        i, j = g.at(power[g.id])[:2] if len(g.filt) > 1 else (g.at(power[g.id])[0], 0)
        pos[g.id] = (float(i), float(j))
    edges = [(x, y, f"U^{k}" if k else "") for x, y, k in c.terms()]
    return pos, edges


def _mono(u: int, v: int) -> str:
    parts = []
    if u:
        parts.append("U" if u == 1 else f"U^{u}")
    if v:
        parts.append("V" if v == 1 else f"V^{v}")
    return "".join(parts)


def to_svg(c: ComplexUV | FilteredComplex, labels: bool = True, powers: bool = False,
           unit: int = 32, margin: int = 60) -> str:
    pos, edges = layout(c)
    if not pos:
        pos = {}
    xs = [p[0] for p in pos.values()] or [0.0]
    ys = [p[1] for p in pos.values()] or [0.0]
    x0, x1 = min(xs + [0.0]), max(xs + [0.0])
    y0, y1 = min(ys + [0.0]), max(ys + [0.0])
    width = int((x1 - x0) * unit + 2 * margin)
    height = int((y1 - y0) * unit + 2 * margin)

    def px(p: Point) -> tuple[float, float]:
        return (margin + (p[0] - x0) * unit, margin + (y1 - p[1]) * unit)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           '<rect width="100%" height="100%" fill="white"/>']
    ox, oy = px((0.0, 0.0))
    out.append(f'<line x1="{margin / 2:.1f}" y1="{oy:.1f}" x2="{width - margin / 2:.1f}" y2="{oy:.1f}" '
               'stroke="#999" stroke-width="1"/>')
    out.append(f'<line x1="{ox:.1f}" y1="{margin / 2:.1f}" x2="{ox:.1f}" y2="{height - margin / 2:.1f}" '
               'stroke="#999" stroke-width="1"/>')
    xlab, ylab = ("U", "V") if isinstance(c, ComplexUV) else ("i", "j")
    out.append(f'<text x="{width - margin / 2:.1f}" y="{oy - 6:.1f}" font-size="12">{xlab}</text>')
    out.append(f'<text x="{ox + 6:.1f}" y="{margin / 2 + 10:.1f}" font-size="12">{ylab}</text>')
    for x, y, lab in edges:
        (ax, ay), (bx, by) = px(pos[x]), px(pos[y])
        out.append(f'<line x1="{ax:.1f}" y1="{ay:.1f}" x2="{bx:.1f}" y2="{by:.1f}" '
                   'stroke="black" stroke-width="1.5"/>')
        if powers and lab:
            out.append(f'<text x="{(ax + bx) / 2 + 3:.1f}" y="{(ay + by) / 2 - 3:.1f}" '
                       f'font-size="9" fill="#36c">{escape(lab)}</text>')
    for g, p in pos.items():
        cx, cy = px(p)
        out.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="3"/>')
        if labels:
            out.append(f'<text x="{cx + 5:.1f}" y="{cy - 5:.1f}" font-size="11">{escape(g)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def to_dot(c: ComplexUV | FilteredComplex) -> str:
    pos, edges = layout(c)
    lines = ["digraph complex {", "  node [shape=point];"]
    for g, (x, y) in pos.items():
        lines.append(f'  "{g}" [xlabel="{g}", pos="{x:g},{y:g}!"];')
    for x, y, lab in edges:
        attr = f' [label="{lab}"]' if lab else ""
        lines.append(f'  "{x}" -> "{y}"{attr};')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_tsv(c: ComplexUV | FilteredComplex) -> str:
    rows = []
    if isinstance(c, ComplexUV):
        rows.append("kind\tid\tgrU\tgrV")
        rows += [f"gen\t{g.id}\t{g.gr_u}\t{g.gr_v}" for g in c.generators]
        rows.append("kind\tfrom\tto\tu\tv")
        rows += [f"edge\t{x}\t{y}\t{u}\t{v}" for x, y, u, v in c.edges()]
    else:
        rows.append("kind\tid\t" + "\t".join(c.axes) + "\tmaslov")
        rows += [f"gen\t{g.id}\t" + "\t".join(map(str, g.filt)) + f"\t{g.maslov}"
                 for g in c.gens.values()]
        rows.append("kind\tfrom\tto\tuPower")
        rows += [f"edge\t{x}\t{y}\t{k}" for x, y, k in c.terms()]
    return "\n".join(rows) + "\n"
