"""Tropical polynomials, their regular dual subdivisions and tropical curves.

Convention: Trop(F)(w) = max_I (val(c_I) + I . w), with val(t) = -1.  The
dual subdivision is cut out by the *upper* faces of the lifted support
{(I, val(c_I))}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import lcm
from typing import Mapping, Sequence

import numpy as np

from .lattice import (
    LatticePolygon,
    area,
    convex_hull,
    cross,
    lattice_length,
    primitive_vector,
)
from .poly import Poly
from .puiseux import PuiseuxScalar, valuation


class EmptySupport(ValueError):
    pass


class DegenerateNewtonPolygon(ValueError):
    pass


@dataclass(frozen=True)
class TropicalPolynomial:
    """Map from exponent (i, j) to the valuation of its coefficient."""

    coeffs: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        if not self.coeffs:
            raise EmptySupport("tropical polynomial with empty support")
        object.__setattr__(
            self,
            "coeffs",
            {(int(i), int(j)): Fraction(v) for (i, j), v in sorted(self.coeffs.items())},
        )

    @property
    def support(self) -> list[tuple[int, int]]:
        return list(self.coeffs)

    def newton_polygon(self) -> LatticePolygon:
        return convex_hull(self.coeffs)

    def __call__(self, w: Sequence) -> Fraction:
        return max(v + i * Fraction(w[0]) + j * Fraction(w[1]) for (i, j), v in self.coeffs.items())

    def to_json(self) -> dict:
        return {"coeffs": [[i, j, str(v)] for (i, j), v in self.coeffs.items()]}

    @classmethod
    def from_json(cls, data: dict) -> "TropicalPolynomial":
        return cls({(int(i), int(j)): Fraction(str(v)) for i, j, v in data["coeffs"]})


def tropicalize(f: Poly) -> TropicalPolynomial:
    if f.is_zero():
        raise EmptySupport("cannot tropicalize the zero polynomial")
    vals = {}
    for key, c in f.coeffs.items():
        vals[key] = Fraction(valuation(c)) if isinstance(c, PuiseuxScalar) else Fraction(0)
    return TropicalPolynomial(vals)


@dataclass(frozen=True)
class Cell:
    """2-cell of the subdivision: polygon, support points on it, dual weight."""

    id: int
    polygon: LatticePolygon
    points: tuple[tuple[int, int], ...]
    weight: tuple[Fraction, Fraction]

    @property
    def area(self) -> Fraction:
        return area(self.polygon)


@dataclass(frozen=True)
class SubEdge:
    """Edge of the subdivision, with the (one or two) 2-cells containing it."""

    id: int
    a: tuple[int, int]
    b: tuple[int, int]
    cells: tuple[int, ...]

    @property
    def length(self) -> int:
        return lattice_length(self.a, self.b)

    @property
    def interior(self) -> bool:
        return len(self.cells) == 2


@dataclass
class DualSubdivision:
    polygon: LatticePolygon
    cells: list[Cell]
    edges: list[SubEdge]

    @cached_property
    def vertices(self) -> list[tuple[int, int]]:
        return sorted({p for c in self.cells for p in c.points})

    def edge_between(self, a, b) -> SubEdge | None:
        key = frozenset((tuple(a), tuple(b)))
        for e in self.edges:
            if frozenset((e.a, e.b)) == key:
                return e
        return None


def _upper_faces(tp: TropicalPolynomial) -> list[tuple[tuple[int, ...], tuple[int, int, int]]]:
    """Upper facets of the lifted support as (point indices, integer normal)."""
    pts = list(tp.coeffs)
    den = lcm(*(v.denominator for v in tp.coeffs.values()))
    lifts = [int(tp.coeffs[p] * den) for p in pts]
    big = max(abs(z) for z in lifts) * max(max(abs(x), abs(y)) for x, y in pts) > 10**12
    dtype = object if big else np.int64
    P = np.array([[x, y, z] for (x, y), z in zip(pts, lifts)], dtype=dtype)
    n = len(pts)
    tri = np.array(list(combinations(range(n), 3)), dtype=np.int64)
    A, B, C = P[tri[:, 0]], P[tri[:, 1]], P[tri[:, 2]]
    u, v = B - A, C - A
    normal = np.stack(
        [
            u[:, 1] * v[:, 2] - u[:, 2] * v[:, 1],
            u[:, 2] * v[:, 0] - u[:, 0] * v[:, 2],
            u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0],
        ],
        axis=1,
    )
    keep = normal[:, 2] != 0
    tri, A, normal = tri[keep], A[keep], normal[keep]
    sign = np.where(normal[:, 2] > 0, 1, -1)
    normal = normal * sign[:, None]
    # heights of all points relative to each candidate plane
    rel = normal @ P.T - (normal * A).sum(axis=1)[:, None]
    upper = (rel <= 0).all(axis=1)
    faces = {}
    for k in np.flatnonzero(upper):
        on = tuple(int(i) for i in np.flatnonzero(rel[k] == 0))
        if on not in faces:
            nx, ny, nz = (int(c) for c in normal[k])
            faces[on] = (nx, ny, nz * den)
    return sorted(faces.items())


def dual_subdivision(tp: TropicalPolynomial) -> DualSubdivision:
    poly = tp.newton_polygon()
    if poly.is_degenerate:
        raise DegenerateNewtonPolygon("support does not span the plane")
    pts = list(tp.coeffs)
    cells = []
    for idx, (on, (nx, ny, nz)) in enumerate(_upper_faces(tp)):
        members = tuple(sorted(pts[i] for i in on))
        # plane nx*x + ny*y + nz*val = const  =>  val + I.w = const/nz with w = (nx, ny)/nz
        w = (Fraction(nx, nz), Fraction(ny, nz))
        cells.append(Cell(idx, convex_hull(members), members, w))
    edge_cells: dict[frozenset, list[int]] = {}
    ends: dict[frozenset, tuple] = {}
    for c in cells:
        for a, b in c.polygon.edges:
            key = frozenset((a, b))
            edge_cells.setdefault(key, []).append(c.id)
            ends.setdefault(key, tuple(sorted((a, b))))
    edges = [
        SubEdge(i, ends[k][0], ends[k][1], tuple(edge_cells[k]))
        for i, k in enumerate(sorted(edge_cells, key=lambda k: ends[k]))
    ]
    return DualSubdivision(poly, cells, edges)


@dataclass(frozen=True)
class CurveVertex:
    id: int
    point: tuple[Fraction, Fraction]
    cell: int


@dataclass(frozen=True)
class CurveEdge:
    """Bounded edge (``end`` set) or ray (``end is None``) leaving ``start``.

    ``direction`` is the primitive integer vector from start towards end
    (or towards infinity), ``weight`` the lattice length of the dual edge.
    """

    id: int
    start: int
    end: int | None
    direction: tuple[int, int]
    dual: int
    weight: int

    @property
    def is_ray(self) -> bool:
        return self.end is None


@dataclass
class TropicalCurveComplex:
    tropical: TropicalPolynomial
    subdivision: DualSubdivision
    vertices: list[CurveVertex]
    edges: list[CurveEdge]
    adjacency: dict[int, list[tuple[int, tuple[int, int], int | None]]] = field(
        default_factory=dict
    )

    @property
    def polygon(self) -> LatticePolygon:
        return self.subdivision.polygon

    def vertex_of_cell(self, cell_id: int) -> CurveVertex:
        return self.vertices[cell_id]

    def cell_of_vertex(self, vid: int) -> Cell:
        return self.subdivision.cells[self.vertices[vid].cell]

    def edge_of_dual(self, sub_edge_id: int) -> CurveEdge:
        return self._by_dual[sub_edge_id]

    @cached_property
    def _by_dual(self) -> dict[int, CurveEdge]:
        return {e.dual: e for e in self.edges}

    def balancing_defects(self) -> dict[int, tuple[int, int]]:
        """Nonzero sums of weighted primitive outgoing directions, by vertex."""
        bad = {}
        for v in self.vertices:
            sx = sy = 0
            for eid, d, _ in self.adjacency[v.id]:
                w = self.edges[eid].weight
                sx += w * d[0]
                sy += w * d[1]
            if (sx, sy) != (0, 0):
                bad[v.id] = (sx, sy)
        return bad

    def to_json(self) -> dict:
        def q(x):
            return str(x)

        return {
            "vertices": [
                {"id": v.id, "point": [q(v.point[0]), q(v.point[1])], "cell": v.cell,
                 "dual_area": q(self.subdivision.cells[v.cell].area)}
                for v in self.vertices
            ],
            "edges": [
                {"id": e.id, "start": e.start, "end": e.end, "direction": list(e.direction),
                 "weight": e.weight, "ray": e.is_ray,
                 "dual": [list(self.subdivision.edges[e.dual].a), list(self.subdivision.edges[e.dual].b)]}
                for e in self.edges
            ],
            "subdivision": {
                "polygon": self.polygon.to_json(),
                "cells": [
                    {"id": c.id, "vertices": [list(p) for p in c.polygon.vertices],
                     "points": [list(p) for p in c.points], "area": q(c.area)}
                    for c in self.subdivision.cells
                ],
            },
        }


def _outward_normal(a, b) -> tuple[int, int]:
    """Primitive outward normal of the counterclockwise edge a -> b."""
    return primitive_vector((b[1] - a[1], -(b[0] - a[0])))


def curve_complex(tp: TropicalPolynomial) -> TropicalCurveComplex:
    sub = dual_subdivision(tp)
    vertices = [CurveVertex(c.id, c.weight, c.id) for c in sub.cells]
    edges: list[CurveEdge] = []
    adjacency: dict[int, list] = {v.id: [] for v in vertices}
    for se in sub.edges:
        if se.interior:
            ca, cb = se.cells
            pa, pb = vertices[ca].point, vertices[cb].point
            d = primitive_vector((pb[0] - pa[0], pb[1] - pa[1]))
            e = CurveEdge(len(edges), ca, cb, d, se.id, se.length)
            adjacency[ca].append((e.id, d, cb))
            adjacency[cb].append((e.id, (-d[0], -d[1]), ca))
        else:
            (ca,) = se.cells
            cell = sub.cells[ca]
            # orient the edge counterclockwise with respect to its cell
            a, b = se.a, se.b
            if (a, b) not in cell.polygon.edges:
                a, b = b, a
            d = _outward_normal(a, b)
            e = CurveEdge(len(edges), ca, None, d, se.id, se.length)
            adjacency[ca].append((e.id, d, None))
        edges.append(e)
    return TropicalCurveComplex(tp, sub, vertices, edges, adjacency)


def initial_support(tp: TropicalPolynomial, w: Sequence) -> set[tuple[int, int]]:
    """Exponents where val(c_I) + I.w attains its maximum."""
    w0, w1 = Fraction(w[0]), Fraction(w[1])
    scores = {I: v + I[0] * w0 + I[1] * w1 for I, v in tp.coeffs.items()}
    best = max(scores.values())
    return {I for I, s in scores.items() if s == best}


def affine_dimension(points) -> int:
    pts = list(points)
    if len(pts) <= 1:
        return 0
    a = pts[0]
    b = next((p for p in pts if p != a), None)
    if b is None:
        return 0
    if all(cross(a, b, p) == 0 for p in pts):
        return 1
    return 2


@dataclass(frozen=True)
class Location:
    """Where a point sits relative to a tropical curve.

    ``kind`` is "vertex", "edge" or "complement"; ``index`` is the curve
    vertex id, curve edge id, or the dual lattice point respectively.
    """

    kind: str
    index: object
    argmax: frozenset

    @property
    def on_curve(self) -> bool:
        return self.kind != "complement"


def locate(curve: TropicalCurveComplex, p: Sequence) -> Location:
    arg = initial_support(curve.tropical, p)
    dim = affine_dimension(arg)
    if dim == 0:
        (pt,) = arg
        return Location("complement", pt, frozenset(arg))
    if dim == 1:
        hull = convex_hull(arg)
        se = curve.subdivision.edge_between(*hull.vertices)
        assert se is not None, "argmax segment is not a subdivision edge"
        return Location("edge", curve.edge_of_dual(se.id).id, frozenset(arg))
    for c in curve.subdivision.cells:
        if set(c.points) == arg:
            return Location("vertex", c.id, frozenset(arg))
    raise AssertionError("argmax cell missing from the subdivision")
