"""Seeded instance generators and brute-force oracles shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product
from math import gcd

from tropinfl.influence import tangent_cone
from tropinfl.lattice import LatticePolygon, convex_hull, direction_set, minimal_lattice_width, rectangle, triangle
from tropinfl.poly import Domain, Poly
from tropinfl.position import PointConfiguration, floor_points, perturb_to_general_position
from tropinfl.puiseux import BaseField
from tropinfl.solver import curve_through, laurent_point, multiplicity_system, solve
from tropinfl.tropical import TropicalPolynomial, curve_complex, locate, tropicalize

P = 32003
LAURENT = Domain(BaseField.prime(P), laurent=True)


# ------------------------------------------------------------ polygons


def random_polygon(rng: random.Random, hi: int = 12, k: tuple[int, int] = (3, 8)) -> LatticePolygon:
    while True:
        pts = [(rng.randint(0, hi), rng.randint(0, hi)) for _ in range(rng.randint(*k))]
        poly = convex_hull(pts)
        if poly.dim == 2:
            return poly


def brute_hull_vertices(points) -> set[tuple[int, int]]:
    """Endpoints of segments with every other point weakly left and not beyond them."""
    pts = sorted(set(map(tuple, points)))
    if len(pts) < 3:
        return set(pts)
    verts = set()
    for a, b in product(pts, pts):
        if a == b:
            continue
        ok = True
        for c in pts:
            cr = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if cr < 0:
                ok = False
                break
            if cr == 0:
                # collinear points must lie within the segment
                dot = (c[0] - a[0]) * (b[0] - a[0]) + (c[1] - a[1]) * (b[1] - a[1])
                if dot < 0 or dot > (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2:
                    ok = False
                    break
        if ok:
            verts.update((a, b))
    return verts


def brute_width(poly: LatticePolygon, bound: int = 24) -> int:
    best = None
    for u1 in range(-bound, bound + 1):
        for u2 in range(-bound, bound + 1):
            if (u1, u2) == (0, 0) or gcd(u1, u2) != 1:
                continue
            vals = [u1 * x + u2 * y for x, y in poly.vertices]
            w = max(vals) - min(vals)
            best = w if best is None else min(best, w)
    return best


def brute_lattice_points(poly: LatticePolygon) -> list[tuple[int, int]]:
    x0, y0, x1, y1 = poly.bbox()
    return [(x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1) if poly.contains((x, y))]


def random_tropical(rng: random.Random, max_points: int = 12) -> TropicalPolynomial:
    while True:
        poly = random_polygon(rng, hi=4, k=(3, 6))
        if len(poly.lattice_points) <= max_points:
            break
    return TropicalPolynomial({p: Fraction(rng.randint(-6, 6), rng.choice((1, 1, 2, 3))) for p in poly.lattice_points})


# ------------------------------------------------------------ oracles


def bfs_influence(p, curve) -> dict[int, int]:
    """Connected component of p in curve ∩ TC(p), found by graph search over whole edges."""
    cone = tangent_cone(p, curve.polygon)
    px, py = cone.apex

    def on_cone_line(edge, point):
        d = edge.direction
        return any(
            u[0] * d[0] + u[1] * d[1] == 0 and u[0] * (point[0] - px) + u[1] * (point[1] - py) == 0
            for u in cone.normals
        )

    loc = locate(curve, p)
    if not loc.on_curve:
        return {}
    vpos = {v.id: v.point for v in curve.vertices}
    if loc.kind == "vertex":
        frontier = [loc.index]
    else:
        e = curve.edges[loc.index]
        frontier = [v for v in (e.start, e.end) if v is not None]
    seen = set(frontier)
    while frontier:
        v = frontier.pop()
        for eid, _, other in curve.adjacency[v]:
            if other is None or other in seen:
                continue
            if on_cone_line(curve.edges[eid], vpos[v]):
                seen.add(other)
                frontier.append(other)
    mult = {v: 1 for v in seen}
    if loc.kind == "vertex":
        mult[loc.index] = 2
    return mult


def _lines(p, normals):
    return [(u, u[0] * p[0] + u[1] * p[1]) for u in normals]


def brute_general_position(coords, poly: LatticePolygon) -> bool:
    """Pairwise-transversal cones and no point on three cones, by direct intersection."""
    normals = sorted(direction_set(poly))
    cones = [tangent_cone(p, poly) for p in coords]
    for i, j in combinations(range(len(coords)), 2):
        if cones[i].contains(coords[j]):
            return False
    for i, j, k in combinations(range(len(coords)), 3):
        for (a, ca), (b, cb) in product(_lines(coords[i], normals), _lines(coords[j], normals)):
            det = a[0] * b[1] - a[1] * b[0]
            if det == 0:
                continue
            x = Fraction(ca * b[1] - cb * a[1], det)
            y = Fraction(a[0] * cb - b[0] * ca, det)
            if cones[k].contains((x, y)):
                return False
    return True


# ------------------------------------------------------------ solved instances


def _width_polygon(rng: random.Random, m: int) -> LatticePolygon:
    choices = [triangle(max(m, 2)), rectangle(m, m + 1), rectangle(m + 1, m)]
    if rng.random() < 0.5:
        return rng.choice(choices)
    while True:
        poly = random_polygon(rng, hi=m + 3, k=(4, 7))
        if minimal_lattice_width(poly)[0] >= m and len(poly.lattice_points) <= 30:
            return poly


def single_point_instances(seed: int, count: int):
    """(polygon, point, m, curve, poly) with curve of multiplicity m at (t^-x, t^-y).

    Only instances whose actual Newton polygon keeps width >= m are kept.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m = 1 + len(out) % 4
        poly = _width_polygon(rng, m)
        if len(poly.lattice_points) <= m * (m + 1) // 2:
            continue
        xy = (rng.randint(-5, 5), rng.randint(-5, 5))
        cond = [(laurent_point(*xy, LAURENT.base), m)]
        res = curve_through(poly, cond, LAURENT, seed=rng.randint(0, 10**6))
        if not res.found or minimal_lattice_width(res.poly.newton_polygon())[0] < m:
            continue
        system = multiplicity_system(poly, cond, LAURENT)
        out.append({"polygon": poly, "point": xy, "m": m, "poly": res.poly, "system": system, "report": res.report,
                    "curve": curve_complex(tropicalize(res.poly))})
    return out


SMALL_POLYGONS = [
    triangle(2),
    triangle(3),
    rectangle(1, 2),
    rectangle(2, 2),
    convex_hull([(0, 0), (2, 0), (0, 2), (2, 1)]),
]


def multi_point_instances(seed: int, count: int):
    """Curves through 2..4 points in general position, each of multiplicity <= min(2, width)."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, 4)
        poly = rng.choice(SMALL_POLYGONS)
        w, _ = minimal_lattice_width(poly)
        ms = [rng.randint(1, min(2, w)) for _ in range(n)]
        if sum(m * (m + 1) // 2 for m in ms) >= len(poly.lattice_points):
            continue
        cfg = PointConfiguration.build([(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(n)], ms)
        try:
            cfg, _ = perturb_to_general_position(cfg, poly, max_radius=80)
        except RuntimeError:
            continue
        conds = [(laurent_point(*p.xy, LAURENT.base), p.m) for p in cfg.points]
        res = curve_through(poly, conds, LAURENT, seed=rng.randint(0, 10**6))
        if not res.found:
            continue
        out.append({"polygon": poly, "config": cfg, "poly": res.poly, "curve": curve_complex(tropicalize(res.poly))})
    return out


FLOOR_SHAPES = [
    rectangle(2, 3),
    rectangle(3, 4),
    rectangle(2, 5),
    rectangle(3, 3),
    triangle(3),
    triangle(4),
    convex_hull([(0, 0), (4, 0), (3, 3), (0, 2)]),
    convex_hull([(0, 0), (3, 1), (1, 4)]),
]


def floor_instances(seed: int, count: int):
    """Floor configurations through which a curve with the full Newton polygon exists."""
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 40 * count:
            raise RuntimeError("could not generate enough floor instances")
        poly = rng.choice(FLOOR_SHAPES)
        w, _ = minimal_lattice_width(poly)
        n = rng.randint(2, 4)
        ms = [rng.randint(1, min(w, 3)) for _ in range(n)]
        if sum(m * (m + 1) // 2 for m in ms) >= len(poly.lattice_points):
            continue
        floor = floor_points(n, ms, poly, search=20)
        conds = [(laurent_point(x, y, LAURENT.base), m) for (x, y), m in zip(floor.config.coords, ms)]
        res = curve_through(floor.polygon, conds, LAURENT, seed=rng.randint(0, 10**6))
        if not res.found or not res.exact_polygon:
            continue
        system = multiplicity_system(floor.polygon, conds, LAURENT)
        out.append({"floor": floor, "poly": res.poly, "system": system, "report": res.report,
                    "curve": curve_complex(tropicalize(res.poly))})
    return out


# ------------------------------------------------------------ fat points over Q

Q = Domain(BaseField.rationals())


def squared_conic_check(coords) -> bool:
    """Is the unique quartic doubled at five points a scalar times the square of their conic?"""
    conic = multiplicity_system(triangle(2), [(c, 1) for c in coords], Q)
    quartic = multiplicity_system(triangle(4), [(c, 2) for c in coords], Q)
    rc, rq = solve(conic), solve(quartic)
    if rc.kernel_dim != 1 or rq.kernel_dim != 1:
        return False
    g = Poly.from_vector(conic.support, rc.kernel[0], Q)
    f = Poly.from_vector(quartic.support, rq.kernel[0], Q)
    sq = g * g
    k = min(f.coeffs)
    if k not in sq.coeffs:
        return False
    return f.scale(1 / f.coeffs[k]) == sq.scale(1 / sq.coeffs[k])
