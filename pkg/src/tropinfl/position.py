"""Tropical general position of point sets and the almost-horizontal floor configuration."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .lattice import (
    LatticePolygon,
    apply_affine,
    convex_hull,
    direction_set,
    minimal_lattice_width,
    unimodular_normalization,
    width_in_direction,
)
from .influence import PointNotOnCurve
from .tropical import DegenerateNewtonPolygon, TropicalCurveComplex, locate


class WidthTooSmall(ValueError):
    pass


class NonTransversalLine(ValueError):
    pass


@dataclass(frozen=True)
class ConfigPoint:
    label: str
    x: int
    y: int
    m: int

    @property
    def xy(self) -> tuple[int, int]:
        return (self.x, self.y)


@dataclass(frozen=True)
class PointConfiguration:
    points: tuple[ConfigPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        labels = [p.label for p in self.points]
        if len(set(labels)) != len(labels):
            raise ValueError("point labels must be distinct")
        if any(p.m < 1 for p in self.points):
            raise ValueError("multiplicities must be positive")

    @classmethod
    def build(cls, coords: Sequence[Sequence[int]], mults: Sequence[int]) -> "PointConfiguration":
        return cls(
            tuple(ConfigPoint(f"P{i + 1}", int(x), int(y), int(m)) for i, ((x, y), m) in enumerate(zip(coords, mults)))
        )

    @property
    def coords(self) -> list[tuple[int, int]]:
        return [p.xy for p in self.points]

    @property
    def mults(self) -> list[int]:
        return [p.m for p in self.points]

    def __len__(self):
        return len(self.points)

    def moved(self, i: int, xy: tuple[int, int]) -> "PointConfiguration":
        pts = list(self.points)
        p = pts[i]
        pts[i] = ConfigPoint(p.label, xy[0], xy[1], p.m)
        return PointConfiguration(tuple(pts))

    def to_json(self) -> dict:
        return {"points": [{"label": p.label, "x": p.x, "y": p.y, "m": p.m} for p in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> "PointConfiguration":
        return cls(
            tuple(ConfigPoint(str(d["label"]), int(d["x"]), int(d["y"]), int(d["m"])) for d in data["points"])
        )


@dataclass(frozen=True)
class GeneralPositionResult:
    ok: bool
    indices: tuple[int, ...] | None = None
    point: tuple[Fraction, Fraction] | None = None

    def __bool__(self):
        return self.ok


def _normal_keys(normals: np.ndarray) -> np.ndarray:
    return normals[:, 0].astype(object) * (1 << 32) + normals[:, 1].astype(object)


def _canonical_normals_of(diff_x: np.ndarray, diff_y: np.ndarray) -> np.ndarray:
    """Canonical primitive normals (-dy, dx) of nonzero integer vectors, as keys."""
    a, b = -diff_y, diff_x
    g = np.gcd(a, b)
    g[g == 0] = 1
    a, b = a // g, b // g
    flip = (a < 0) | ((a == 0) & (b < 0))
    a = np.where(flip, -a, a)
    b = np.where(flip, -b, b)
    return a.astype(object) * (1 << 32) + b.astype(object)


def is_general_position(
    cfg: PointConfiguration, poly: LatticePolygon, transversal: bool = True
) -> GeneralPositionResult:
    """True iff no three tangent cones TC(P_i) share a point.

    With ``transversal`` (the default) two cones must also never share a
    line, i.e. no P_j lies on TC(P_i).  Without it a vertex P_i sitting on
    another cone is counted three times in the influence budget.
    """
    if poly.is_degenerate:
        raise DegenerateNewtonPolygon("general position needs a two-dimensional polygon")
    n = len(cfg)
    U = np.array(sorted(direction_set(poly)), dtype=np.int64)
    pts = np.array(cfg.coords, dtype=np.int64)
    consts = U @ pts.T  # consts[k, i] = u_k . P_i
    if transversal:
        for i, j in combinations(range(n), 2):
            if np.any(consts[:, i] == consts[:, j]):
                xy = (Fraction(int(pts[j, 0])), Fraction(int(pts[j, 1])))
                return GeneralPositionResult(False, (i, j), xy)
    if n < 3:
        return GeneralPositionResult(True)
    keys = set(_normal_keys(U).tolist())
    ia, ib = np.meshgrid(np.arange(len(U)), np.arange(len(U)), indexing="ij")
    ia, ib = ia.ravel(), ib.ravel()
    det = U[ia, 0] * U[ib, 1] - U[ia, 1] * U[ib, 0]
    for i, j in combinations(range(n), 2):
        others = [k for k in range(n) if k not in (i, j)]
        # a common line means the whole line lies in both cones; any other cone meets it
        shared = np.flatnonzero(consts[:, i] == consts[:, j])
        if len(shared):
            u = U[shared[0]]
            k = others[0]
            pk = pts[k]
            # intersect with the cone line of P_k having a different normal
            v = next(w for w in U if w[0] * u[1] - w[1] * u[0] != 0)
            c1, c2 = int(u @ pts[i]), int(v @ pk)
            d = int(u[0] * v[1] - u[1] * v[0])
            x = Fraction(c1 * int(v[1]) - c2 * int(u[1]), d)
            y = Fraction(int(u[0]) * c2 - int(v[0]) * c1, d)
            return GeneralPositionResult(False, tuple(sorted((i, j, k))), (x, y))
        nz = det != 0
        a, b, dd = ia[nz], ib[nz], det[nz]
        ca, cb = consts[a, i], consts[b, j]
        # det * X for the intersection of line a through P_i and line b through P_j
        X = ca * U[b, 1] - cb * U[a, 1]
        Y = U[a, 0] * cb - U[b, 0] * ca
        for k in others:
            dx = X - dd * pts[k, 0]
            dy = Y - dd * pts[k, 1]
            at_apex = (dx == 0) & (dy == 0)
            hit = at_apex.copy()
            rest = ~at_apex
            if rest.any():
                nk = _canonical_normals_of(dx[rest], dy[rest])
                hit[rest] = np.array([key in keys for key in nk.tolist()], dtype=bool)
            if hit.any():
                h = int(np.flatnonzero(hit)[0])
                point = (Fraction(int(X[h]), int(dd[h])), Fraction(int(Y[h]), int(dd[h])))
                return GeneralPositionResult(False, tuple(sorted((i, j, k))), point)
    return GeneralPositionResult(True)


def _ring(r: int) -> list[tuple[int, int]]:
    if r == 0:
        return [(0, 0)]
    return sorted(
        {(x, y) for x in range(-r, r + 1) for y in range(-r, r + 1) if max(abs(x), abs(y)) == r},
        key=lambda v: (abs(v[0]) + abs(v[1]), v),
    )


def perturb_to_general_position(
    cfg: PointConfiguration, poly: LatticePolygon, seed: int | None = None, max_radius: int = 64
) -> tuple[PointConfiguration, int]:
    """Translate points one at a time by small integer vectors until in general position.

    Returns the new configuration and the largest sup-norm of a translation used.
    """
    rng = random.Random(seed) if seed is not None else None
    out = cfg
    bound = 0
    for i in range(len(cfg)):
        base = cfg.points[i].xy
        for r in range(max_radius + 1):
            ring = _ring(r)
            if rng is not None and r > 0:
                rng.shuffle(ring)
            found = None
            for v in ring:
                trial = out.moved(i, (base[0] + v[0], base[1] + v[1]))
                prefix = PointConfiguration(trial.points[: i + 1])
                if is_general_position(prefix, poly):
                    found = trial
                    break
            if found is not None:
                out = found
                bound = max(bound, r)
                break
        else:
            raise RuntimeError("no general-position translation within the search radius")
    return out, bound


@dataclass
class FloorConfiguration:
    """Points on the line y = x/(N+1) in coordinates where the horizontal width is minimal."""

    config: PointConfiguration
    polygon: LatticePolygon
    original: LatticePolygon
    matrix: tuple[tuple[int, int], tuple[int, int]]
    shift: tuple[int, int]
    height: int
    general_position: bool
    notes: list[str] = field(default_factory=list)

    @property
    def slope(self) -> Fraction:
        return Fraction(1, self.height + 1)

    @property
    def line(self) -> tuple[Fraction, Fraction]:
        return (self.slope, Fraction(0))

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "polygon": self.polygon.to_json(),
            "original_polygon": self.original.to_json(),
            "unimodular_map": {"matrix": [list(r) for r in self.matrix], "shift": list(self.shift)},
            "height": self.height,
            "slope": str(self.slope),
            "general_position": self.general_position,
            "notes": list(self.notes),
        }


def normalize_polygon(poly: LatticePolygon):
    """Map poly so that its minimal lattice width is attained horizontally."""
    _, u = minimal_lattice_width(poly)
    m, shift = unimodular_normalization(poly, u)
    image = convex_hull([apply_affine(m, shift, v) for v in poly.vertices])
    return image, m, shift


def floor_points(n: int, mults: Sequence[int], poly: LatticePolygon, search: int = 40) -> FloorConfiguration:
    """n points of the given multiplicities on the almost horizontal line y = x/(N+1).

    Points are ``((N+1) k_i, k_i)`` with increasing k_i; each k_i is the
    smallest admissible value keeping the prefix in general position, when
    one exists within ``search`` steps.
    """
    if poly.is_degenerate:
        raise DegenerateNewtonPolygon("floor configuration needs a two-dimensional polygon")
    mults = list(mults)
    if len(mults) == 1 and n > 1:
        mults = mults * n
    if len(mults) != n:
        raise ValueError("need one multiplicity per point")
    image, m, shift = normalize_polygon(poly)
    w, _ = minimal_lattice_width(image)
    if w < max(mults):
        raise WidthTooSmall(f"minimal lattice width {w} < max multiplicity {max(mults)}")
    assert width_in_direction(image, (1, 0)) == w
    height = width_in_direction(image, (0, 1))
    step = height + 1
    notes = []
    generic = True
    ks: list[int] = []
    for i in range(n):
        start = ks[-1] + 1 if ks else 0
        chosen = None
        for k in range(start, start + search):
            trial = PointConfiguration.build([(step * kk, kk) for kk in ks + [k]], mults[: i + 1])
            if is_general_position(trial, image):
                chosen = k
                break
        if chosen is None:
            chosen = start
            generic = False
            notes.append(f"point {i + 1}: no general-position slot within {search} steps")
        ks.append(chosen)
    cfg = PointConfiguration.build([(step * k, k) for k in ks], mults)
    return FloorConfiguration(cfg, image, poly, m, shift, height, generic, notes)


def lattice_path(curve: TropicalCurveComplex, line: tuple[Fraction, Fraction]) -> list[tuple[int, int]]:
    """Monomials maximal on the successive pieces of the line y = s x + c, left to right."""
    s, c = Fraction(line[0]), Fraction(line[1])
    # on the line, monomial I contributes (val_I + j c) + (i + j s) x
    funcs: dict[Fraction, list] = {}
    for I, v in curve.tropical.coeffs.items():
        funcs.setdefault(I[0] + I[1] * s, []).append((v + I[1] * c, I))
    lines = []
    for slope in sorted(funcs):
        best = max(f[0] for f in funcs[slope])
        tops = [f[1] for f in funcs[slope] if f[0] == best]
        lines.append((slope, best, tops))
    hull: list = []
    for ln in lines:
        while hull:
            if len(hull) >= 2 and _useless(hull[-2], hull[-1], ln):
                hull.pop()
                continue
            if hull[-1][0] == ln[0] and hull[-1][1] <= ln[1]:
                hull.pop()
                continue
            break
        hull.append(ln)
    for ln in hull:
        if len(ln[2]) > 1:
            raise NonTransversalLine("the line contains an edge of the tropical curve")
    return [ln[2][0] for ln in hull]


def _useless(l1, l2, l3) -> bool:
    """Whether l2 never strictly beats both l1 and l3 (slopes increasing)."""
    # intersection x of l1,l3 vs l1,l2
    s1, b1, _ = l1
    s2, b2, _ = l2
    s3, b3, _ = l3
    return (b3 - b1) * (s2 - s1) >= (b2 - b1) * (s3 - s1)


@dataclass
class SValues:
    s: list[int]
    kinds: list[str]
    path: list[tuple[int, int]]
    path_extent: int
    horizontal_width: int

    @property
    def ok(self) -> bool:
        return sum(self.s) <= self.path_extent <= self.horizontal_width

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "kinds": self.kinds,
            "sum_s": sum(self.s),
            "path": [list(p) for p in self.path],
            "path_extent": self.path_extent,
            "horizontal_width": self.horizontal_width,
            "ok": self.ok,
        }


def s_values(cfg: PointConfiguration, curve: TropicalCurveComplex, line: tuple[Fraction, Fraction]) -> SValues:
    """Horizontal projection lengths of the dual cells met by each point."""
    s, kinds = [], []
    for p in cfg.points:
        loc = locate(curve, p.xy)
        if loc.kind == "complement":
            raise PointNotOnCurve(f"{p.label} = {p.xy} is not on the tropical curve")
        if loc.kind == "edge":
            se = curve.subdivision.edges[curve.edges[loc.index].dual]
            s.append(abs(se.b[0] - se.a[0]))
        else:
            s.append(width_in_direction(curve.subdivision.cells[loc.index].polygon, (1, 0)))
        kinds.append(loc.kind)
    path = lattice_path(curve, line)
    xs = [q[0] for q in path]
    return SValues(s, kinds, path, max(xs) - min(xs), width_in_direction(curve.polygon, (1, 0)))
