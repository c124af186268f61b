"""SVG figures: a tropical curve next to its dual subdivision.

The polygon panel uses 40 px per lattice unit.  The curve panel is fitted
to the vertices and marked points with a 10% margin on every side; rays
are clipped at its border.  Influence cells are filled with 50% gray.
Output depends only on the inputs, so figures can be compared byte for byte.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .tropical import TropicalCurveComplex

UNIT = 40
PAD = 20
MARGIN = Fraction(1, 10)
GRAY = "#808080"


def _f(x) -> str:
    return f"{float(x):.2f}"


def _dual_panel(curve: TropicalCurveComplex, shade: Mapping[int, int], x_off: float) -> tuple[list[str], float, float]:
    poly = curve.polygon
    x0, y0, x1, y1 = poly.bbox()
    width = (x1 - x0) * UNIT + 2 * PAD
    height = (y1 - y0) * UNIT + 2 * PAD

    def px(p):
        return x_off + PAD + (p[0] - x0) * UNIT, PAD + (y1 - p[1]) * UNIT

    out = ['<g class="dual">']
    for cell in curve.subdivision.cells:
        pts = " ".join(f"{_f(a)},{_f(b)}" for a, b in map(px, cell.polygon.vertices))
        v = curve.vertex_of_cell(cell.id).id
        fill = GRAY if v in shade else "none"
        sw = "2.50" if shade.get(v) == 2 else "1.00"
        out.append(f'<polygon points="{pts}" fill="{fill}" stroke="black" stroke-width="{sw}"/>')
    for p in poly.lattice_points:
        a, b = px(p)
        out.append(f'<circle cx="{_f(a)}" cy="{_f(b)}" r="2.00" fill="black"/>')
    out.append("</g>")
    return out, width, height


def _curve_panel(
    curve: TropicalCurveComplex,
    points: Sequence[Sequence],
    shade: Mapping[int, int],
    size: float,
) -> list[str]:
    coords = [v.point for v in curve.vertices] + [(Fraction(p[0]), Fraction(p[1])) for p in points]
    if not coords:
        coords = [(Fraction(0), Fraction(0))]
    xs = [c[0] for c in coords]
    ys = [c[1] for c in coords]
    extent = max(max(xs) - min(xs), max(ys) - min(ys), Fraction(1))
    span = extent * (1 + 2 * MARGIN)
    cx = (max(xs) + min(xs)) / 2
    cy = (max(ys) + min(ys)) / 2
    scale = Fraction(size) / span

    def px(p):
        return (p[0] - cx) * scale + Fraction(size) / 2, (cy - p[1]) * scale + Fraction(size) / 2

    out = [
        '<clipPath id="curve-view">'
        f'<rect x="0.00" y="0.00" width="{_f(size)}" height="{_f(size)}"/></clipPath>',
        '<g class="curve" clip-path="url(#curve-view)">',
        f'<rect x="0.00" y="0.00" width="{_f(size)}" height="{_f(size)}" fill="white" stroke="black"/>',
    ]
    far = 2 * span
    vmap = {v.id: v.point for v in curve.vertices}
    for e in curve.edges:
        a = vmap[e.start]
        if e.end is None:
            d = e.direction
            norm = max(abs(d[0]), abs(d[1]))
            b = (a[0] + far * d[0] / norm, a[1] + far * d[1] / norm)
        else:
            b = vmap[e.end]
        (ax, ay), (bx, by) = px(a), px(b)
        out.append(
            f'<line x1="{_f(ax)}" y1="{_f(ay)}" x2="{_f(bx)}" y2="{_f(by)}" '
            f'stroke="black" stroke-width="{_f(1.5 * e.weight)}"/>'
        )
    for v in curve.vertices:
        a, b = px(v.point)
        fill = GRAY if v.id in shade else "black"
        out.append(f'<circle cx="{_f(a)}" cy="{_f(b)}" r="3.00" fill="{fill}" stroke="black"/>')
    for p in points:
        a, b = px((Fraction(p[0]), Fraction(p[1])))
        out.append(f'<circle cx="{_f(a)}" cy="{_f(b)}" r="5.00" fill="none" stroke="black" stroke-width="2.00"/>')
    out.append("</g>")
    return out


def render(
    curve: TropicalCurveComplex,
    points: Sequence[Sequence] = (),
    shade: Mapping[int, int] | None = None,
) -> str:
    """Curve on the left, dual subdivision on the right.

    ``shade`` maps curve vertex ids to multiplicities; their dual cells are
    filled, with a heavier outline where the multiplicity is 2.
    """
    shade = dict(shade or {})
    x0, y0, x1, y1 = curve.polygon.bbox()
    size = max(240, (y1 - y0) * UNIT + 2 * PAD)
    dual, w, h = _dual_panel(curve, shade, size + PAD)
    total_w = size + PAD + w
    total_h = max(size, h)
    body = _curve_panel(curve, points, shade, size) + dual
    return "\n".join(
        [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(total_w)}" height="{_f(total_h)}" '
            f'viewBox="0 0 {_f(total_w)} {_f(total_h)}">',
            *body,
            "</svg>",
        ]
    ) + "\n"
