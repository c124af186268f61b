"""Tangent cones at a point and the curve vertices it influences.

For a point P on a tropical curve C with Newton polygon D, the tangent cone
TC(P) is the union of the lines through P whose normals are directions
between lattice points of D.  Any two such lines meet only at P, so the
connected component of P inside C ∩ TC(P) is the union, over all lines, of
the maximal segment of C through P lying on that line.  ``influence_set``
walks each of those segments.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice import Direction, LatticePolygon, direction_set
from .tropical import DegenerateNewtonPolygon, TropicalCurveComplex, locate


class PointNotOnCurve(ValueError):
    pass


@dataclass(frozen=True)
class TangentCone:
    apex: tuple[Fraction, Fraction]
    normals: tuple[Direction, ...]

    def contains(self, q: Sequence) -> bool:
        dx = Fraction(q[0]) - self.apex[0]
        dy = Fraction(q[1]) - self.apex[1]
        return any(u[0] * dx + u[1] * dy == 0 for u in self.normals)


def tangent_cone(p: Sequence, poly: LatticePolygon) -> TangentCone:
    if poly.is_degenerate:
        raise DegenerateNewtonPolygon("tangent cone needs a two-dimensional polygon")
    return TangentCone((Fraction(p[0]), Fraction(p[1])), tuple(sorted(direction_set(poly))))


@dataclass(frozen=True)
class InfluenceSet:
    """Curve vertex ids reached from ``apex`` with their multiplicities (1 or 2)."""

    apex: tuple[Fraction, Fraction]
    multiplicity: dict[int, int]

    @property
    def vertices(self) -> list[int]:
        return sorted(self.multiplicity)

    def __len__(self):
        return len(self.multiplicity)


def _walk(curve: TropicalCurveComplex, start, d: tuple[int, int]) -> list[int]:
    """Vertices met moving from ``start`` along direction d while staying on the curve."""
    reached = []
    kind, index = start
    if kind == "edge":
        e = curve.edges[index]
        if e.direction == d:
            if e.end is None:
                return reached
            v = e.end
        elif e.direction == (-d[0], -d[1]):
            v = e.start
        else:
            return reached
        reached.append(v)
    else:
        v = index
    while True:
        nxt = next(((eid, other) for eid, od, other in curve.adjacency[v] if od == d), None)
        if nxt is None or nxt[1] is None:
            return reached
        v = nxt[1]
        reached.append(v)


def _line_directions(u: Direction) -> tuple[tuple[int, int], tuple[int, int]]:
    return (-u[1], u[0]), (u[1], -u[0])


def influence_set(p: Sequence, curve: TropicalCurveComplex, poly: LatticePolygon | None = None) -> InfluenceSet:
    poly = poly or curve.polygon
    cone = tangent_cone(p, poly)
    loc = locate(curve, p)
    mult: dict[int, int] = {}
    if not loc.on_curve:
        return InfluenceSet(cone.apex, mult)
    start = (loc.kind, loc.index)
    if loc.kind == "vertex":
        mult[loc.index] = 2
    for u in cone.normals:
        for d in _line_directions(u):
            for v in _walk(curve, start, d):
                mult.setdefault(v, 1)
    return InfluenceSet(cone.apex, mult)


def influence_area(p: Sequence, curve: TropicalCurveComplex, poly: LatticePolygon | None = None) -> Fraction:
    infl = influence_set(p, curve, poly)
    return sum(
        (m * curve.cell_of_vertex(v).area for v, m in infl.multiplicity.items()),
        Fraction(0),
    )


def directional_influence_set(p: Sequence, curve: TropicalCurveComplex, u: Direction) -> list[int]:
    """Vertices on the segment of the curve through p along the line with normal u.

    Includes p itself when p is a vertex.
    """
    loc = locate(curve, p)
    if not loc.on_curve:
        raise PointNotOnCurve(f"{tuple(p)} does not lie on the tropical curve")
    start = (loc.kind, loc.index)
    found = [loc.index] if loc.kind == "vertex" else []
    for d in _line_directions(u):
        found.extend(_walk(curve, start, d))
    return sorted(set(found))


def directional_influence_area(
    p: Sequence, curve: TropicalCurveComplex, u: Direction, include_apex: bool = False
) -> Fraction:
    """Sum of dual-cell areas over the vertices reached along the line with normal u.

    The dual cell of p itself (when p is a vertex) counts only with
    ``include_apex``.
    """
    loc = locate(curve, p)
    verts = directional_influence_set(p, curve, u)
    if loc.kind == "vertex" and not include_apex:
        verts = [v for v in verts if v != loc.index]
    return sum((curve.cell_of_vertex(v).area for v in verts), Fraction(0))
