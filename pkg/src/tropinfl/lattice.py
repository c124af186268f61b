"""Lattice polygons in Z^2: hulls, areas, lattice widths and direction sets.

Points and directions are plain ``(x, y)`` integer tuples.  A direction is
stored in canonical form: primitive, and either ``u1 > 0`` or
``u1 == 0 and u2 > 0``, so that ``u`` and ``-u`` share one representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

import numpy as np

Point = tuple[int, int]
Direction = tuple[int, int]


def cross(o: Sequence[int], a: Sequence[int], b: Sequence[int]) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def primitive(v: Sequence[int]) -> Direction:
    """Canonical primitive direction of a nonzero integer vector."""
    a, b = int(v[0]), int(v[1])
    if a == 0 and b == 0:
        raise ValueError("zero vector has no direction")
    g = gcd(a, b)
    a, b = a // g, b // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return (a, b)


def primitive_vector(v: Sequence) -> tuple[int, int]:
    """Primitive integer vector pointing along ``v`` (sign kept).

    Accepts rational components.
    """
    a, b = Fraction(v[0]), Fraction(v[1])
    if a == 0 and b == 0:
        raise ValueError("zero vector has no direction")
    den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    ia, ib = int(a * den), int(b * den)
    g = gcd(ia, ib)
    return (ia // g, ib // g)


def lattice_length(a: Sequence[int], b: Sequence[int]) -> int:
    return gcd(b[0] - a[0], b[1] - a[1])


@dataclass(frozen=True)
class LatticePolygon:
    """Convex lattice polygon, vertices counterclockwise without collinear triples.

    Degenerate hulls are allowed: a single vertex (``dim == 0``) or the two
    endpoints of a segment (``dim == 1``).
    """

    vertices: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "vertices", tuple((int(x), int(y)) for x, y in self.vertices)
        )
        if not self.vertices:
            raise ValueError("polygon needs at least one vertex")

    @property
    def dim(self) -> int:
        return min(len(self.vertices) - 1, 2)

    @property
    def is_degenerate(self) -> bool:
        return self.dim < 2

    @property
    def edges(self) -> list[tuple[Point, Point]]:
        """Counterclockwise boundary edges (empty for a point, one for a segment)."""
        vs = self.vertices
        if len(vs) == 1:
            return []
        if len(vs) == 2:
            return [(vs[0], vs[1])]
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def bbox(self) -> tuple[int, int, int, int]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def contains(self, p: Sequence) -> bool:
        """Closed containment test; works for rational points."""
        vs = self.vertices
        if len(vs) == 1:
            return tuple(p) == vs[0]
        if len(vs) == 2:
            a, b = vs
            if cross(a, b, p) != 0:
                return False
            return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(
                a[1], b[1]
            ) <= p[1] <= max(a[1], b[1])
        return all(cross(a, b, p) >= 0 for a, b in self.edges)

    @cached_property
    def lattice_points(self) -> tuple[Point, ...]:
        x0, y0, x1, y1 = self.bbox()
        return tuple(
            (x, y)
            for x in range(x0, x1 + 1)
            for y in range(y0, y1 + 1)
            if self.contains((x, y))
        )

    def translate(self, v: Sequence[int]) -> "LatticePolygon":
        return LatticePolygon(tuple((x + v[0], y + v[1]) for x, y in self.vertices))

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_json(cls, data: dict) -> "LatticePolygon":
        return convex_hull([tuple(v) for v in data["vertices"]])


def convex_hull(points: Iterable[Sequence[int]]) -> LatticePolygon:
    """Monotone-chain hull; collinear boundary points are dropped."""
    pts = sorted({(int(p[0]), int(p[1])) for p in points})
    if not pts:
        raise ValueError("convex_hull of an empty point set")
    if len(pts) <= 2:
        return LatticePolygon(tuple(pts))
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        hull = hull[:1]
    return LatticePolygon(tuple(hull))


def area(poly: LatticePolygon) -> Fraction:
    if poly.is_degenerate:
        return Fraction(0)
    vs = poly.vertices
    twice = sum(
        vs[i][0] * vs[(i + 1) % len(vs)][1] - vs[(i + 1) % len(vs)][0] * vs[i][1]
        for i in range(len(vs))
    )
    return Fraction(abs(twice), 2)


def width_in_direction(poly: LatticePolygon, u: Sequence[int]) -> int:
    values = [u[0] * x + u[1] * y for x, y in poly.vertices]
    return max(values) - min(values)


def _width_ball_bound(poly: LatticePolygon, budget: int) -> tuple[int, int]:
    """Box containing every u with width_in_direction(poly, u) <= budget.

    Two independent edge vectors a, b give |u.a|, |u.b| <= budget, a
    parallelogram whose coordinates are bounded by Cramer's rule.
    """
    edges = [(b[0] - a[0], b[1] - a[1]) for a, b in poly.edges]
    best = None
    for i, a in enumerate(edges):
        for b in edges[i + 1 :]:
            det = abs(a[0] * b[1] - a[1] * b[0])
            if det == 0:
                continue
            b1 = -(-budget * (abs(a[1]) + abs(b[1])) // det)
            b2 = -(-budget * (abs(a[0]) + abs(b[0])) // det)
            if best is None or max(b1, b2) < max(best):
                best = (b1, b2)
    assert best is not None
    return best


def minimal_lattice_width(poly: LatticePolygon) -> tuple[int, Direction]:
    """Minimal lattice width and the lexicographically first minimizing direction."""
    if poly.dim == 0:
        return 0, (0, 1)
    if poly.dim == 1:
        a, b = poly.vertices
        d = primitive((b[0] - a[0], b[1] - a[1]))
        return 0, primitive((-d[1], d[0]))
    budget = min(width_in_direction(poly, (1, 0)), width_in_direction(poly, (0, 1)))
    b1, b2 = _width_ball_bound(poly, budget)
    u1, u2 = np.meshgrid(np.arange(0, b1 + 1), np.arange(-b2, b2 + 1), indexing="ij")
    u1, u2 = u1.ravel(), u2.ravel()
    keep = ((u1 > 0) | ((u1 == 0) & (u2 > 0))) & (np.gcd(u1, u2) == 1)
    u1, u2 = u1[keep], u2[keep]
    verts = np.array(poly.vertices, dtype=np.int64)
    vals = np.outer(u1, verts[:, 0]) + np.outer(u2, verts[:, 1])
    widths = vals.max(axis=1) - vals.min(axis=1)
    best = int(widths.min())
    # lexicographic tie break on (u1, u2)
    cands = sorted(
        (int(a), int(b)) for a, b, w in zip(u1, u2, widths) if int(w) == best
    )
    return best, cands[0]


def direction_set(poly: LatticePolygon) -> set[Direction]:
    """Primitive directions of all differences between lattice points of poly."""
    pts = poly.lattice_points
    diffs = {
        (q[0] - p[0], q[1] - p[1]) for i, p in enumerate(pts) for q in pts[i + 1 :]
    }
    return {primitive(d) for d in diffs}


def unimodular_normalization(
    poly: LatticePolygon, u: Direction
) -> tuple[tuple[tuple[int, int], tuple[int, int]], tuple[int, int]]:
    """Affine unimodular map X -> M X + shift with first row of M equal to u.

    The second row is chosen to minimize the height of the image, and the
    shift puts the image in x >= 0, y >= 0 touching both axes.  Under the map
    the width of ``poly`` in direction ``u`` becomes its horizontal width.
    """
    u1, u2 = u
    # extended Euclid: u1*b - u2*a = 1
    old_r, r = u1, u2
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    g = old_r
    if g < 0:
        old_s, old_t = -old_s, -old_t
    # u1*old_s + u2*old_t = 1  ->  row (a, b) = (-old_t, old_s)
    a0, b0 = -old_t, old_s
    best = None
    for k in range(-64, 65):
        a, b = a0 + k * u1, b0 + k * u2
        h = width_in_direction(poly, (a, b))
        key = (h, abs(a) + abs(b), a, b)
        if best is None or key < best:
            best = key
    a, b = best[2], best[3]
    m = ((u1, u2), (a, b))
    xs = [u1 * x + u2 * y for x, y in poly.vertices]
    ys = [a * x + b * y for x, y in poly.vertices]
    return m, (-min(xs), -min(ys))


def apply_affine(m, shift, p: Sequence) -> tuple:
    return (
        m[0][0] * p[0] + m[0][1] * p[1] + shift[0],
        m[1][0] * p[0] + m[1][1] * p[1] + shift[1],
    )


def rectangle(w: int, h: int) -> LatticePolygon:
    return convex_hull([(0, 0), (w, 0), (0, h), (w, h)])


def triangle(d: int) -> LatticePolygon:
    """Newton polygon of a generic degree-d plane curve."""
    return convex_hull([(0, 0), (d, 0), (0, d)])
