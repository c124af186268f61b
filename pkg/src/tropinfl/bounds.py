"""Closed-form area and degree bounds, and certificates over computed influence data.

Every value is an exact rational.  Bounds involving sqrt(n) are exact when
n is a perfect square and are otherwise rounded *down*, so a reported lower
bound never overstates the true one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, isqrt
from typing import Sequence

from .influence import directional_influence_area, influence_area
from .lattice import LatticePolygon, area, minimal_lattice_width, width_in_direction
from .position import PointConfiguration, is_general_position, s_values
from .tropical import TropicalCurveComplex

DEFAULT_PRECISION = Fraction(1, 10**9)


@dataclass
class BoundReport:
    name: str
    hypotheses: dict[str, bool]
    value: Fraction | None
    exact: bool = True
    rounding: str = "exact"
    data: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(self.hypotheses.values())

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "hypotheses": dict(self.hypotheses),
            "value": None if self.value is None else str(self.value),
            "approx": None if self.value is None else float(self.value),
            "exact": self.exact,
            "rounding": self.rounding,
            "data": self.data,
        }


def expected_dimension(d: int, mults: Sequence[int]) -> int:
    """max(-1, d(d+3)/2 - sum m(m+1)/2) for degree-d plane curves."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return max(-1, d * (d + 3) // 2 - sum(m * (m + 1) // 2 for m in mults))


def expected_dimension_polygon(poly: LatticePolygon, mults: Sequence[int]) -> int:
    """Same count with the monomials of an arbitrary Newton polygon."""
    return max(-1, len(poly.lattice_points) - 1 - sum(m * (m + 1) // 2 for m in mults))


def quarter_bound(mults: Sequence[int]) -> Fraction:
    return Fraction(sum(m * m for m in mults), 4)


def smax(mults: Sequence[int], w: int) -> tuple[list[int], int]:
    """Maximize sum s_i^2 subject to 0 <= s_i <= m_i and sum s_i <= w.

    The square sum is convex, so an optimum saturates the largest m_i first
    and puts the leftover budget on the next one.
    """
    if w < 0:
        raise ValueError("width budget must be nonnegative")
    s = [0] * len(mults)
    budget = w
    for i in sorted(range(len(mults)), key=lambda k: -mults[k]):
        take = min(mults[i], budget)
        s[i] = take
        budget -= take
        if budget == 0:
            break
    return s, sum(x * x for x in s)


def theorem1_bound(
    mults: Sequence[int], poly: LatticePolygon | None = None, width: int | None = None
) -> BoundReport:
    """area >= 1/2 sum m_i^2 - 1/2 max sum s_i^2, when the minimal width is >= max m_i."""
    if width is None:
        if poly is None:
            raise ValueError("need a polygon or a width")
        width, _ = minimal_lattice_width(poly)
    ok = width >= max(mults, default=0)
    s, best = smax(mults, width)
    value = Fraction(sum(m * m for m in mults), 2) - Fraction(best, 2) if ok else None
    data = {"mults": list(mults), "width": width, "s": s, "sum_s_squared": best}
    if poly is not None:
        data["area"] = str(area(poly))
        if value is not None:
            data["area_satisfies"] = area(poly) >= value
    return BoundReport("theorem1", {"width >= max(m)": ok}, value, data=data)


def uniform_bound(n: int, m: int, w: int) -> Fraction:
    """1/2 (n - w/m - 1) m^2 for n points of equal multiplicity m <= w."""
    if m > w:
        raise ValueError(f"hypothesis m <= width fails ({m} > {w})")
    if m <= 0:
        raise ValueError("multiplicity must be positive")
    return (n - Fraction(w, m) - 1) * m * m / 2


def uniform_bound_report(n: int, m: int, w: int) -> BoundReport:
    ok = 0 < m <= w
    return BoundReport(
        "uniform",
        {"m <= width": ok},
        uniform_bound(n, m, w) if ok else None,
        data={"n": n, "m": m, "width": w},
    )


def _precision_denominator(precision) -> int:
    return max(1, ceil(1 / Fraction(precision)))


def sqrt_bounds(n: int, precision=DEFAULT_PRECISION) -> tuple[Fraction, Fraction, bool]:
    """Rationals lo <= sqrt(n) <= hi with hi - lo <= precision, and exactness flag."""
    r = isqrt(n)
    if r * r == n:
        return Fraction(r), Fraction(r), True
    q = _precision_denominator(precision)
    lo = isqrt(n * q * q)
    return Fraction(lo, q), Fraction(lo + 1, q), False


def degree_bound(n: int, m: int, precision=DEFAULT_PRECISION) -> BoundReport:
    """Lower bound (sqrt(n) - 1/2 - 1/sqrt(n)) m on the degree, for n >= 4."""
    ok = n >= 4
    lo, _, exact = sqrt_bounds(n, precision)
    # s - 1/2 - 1/s increases with s, so plugging in lo rounds down
    value = (lo - Fraction(1, 2) - 1 / lo) * m if ok else None
    r = isqrt(n)
    return BoundReport(
        "degree",
        {"n >= 4": ok},
        value,
        exact=exact,
        rounding="exact" if exact else "down",
        data={"n": n, "m": m, "sqrt_n": {"isqrt": r, "remainder": n - r * r}},
    )


def nagata_rhs(mults: Sequence[int], precision=DEFAULT_PRECISION) -> BoundReport:
    """sum m_i / sqrt(n), rounded down."""
    n = len(mults)
    if n == 0:
        raise ValueError("need at least one point")
    _, hi, exact = sqrt_bounds(n, precision)
    value = Fraction(sum(mults)) / hi
    r = isqrt(n)
    data = {"n": n, "sum_m": sum(mults), "sqrt_n": {"isqrt": r, "remainder": n - r * r}}
    if n == 2:
        # a line through both points, counted max(m) times
        data["line_degree"] = max(mults)
        data["line_beats_rhs"] = max(mults) <= value
    return BoundReport(
        "nagata_rhs",
        {"n > 9": n > 9},
        value,
        exact=exact,
        rounding="exact" if exact else "down",
        data=data,
    )


@dataclass
class Certificate:
    name: str
    ok: bool
    hypotheses: dict[str, bool]
    terms: list[dict] = field(default_factory=list)
    totals: dict = field(default_factory=dict)
    reason: str | None = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "hypotheses": dict(self.hypotheses),
            "terms": self.terms,
            "totals": {k: str(v) if isinstance(v, Fraction) else v for k, v in self.totals.items()},
            "reason": self.reason,
        }


def verify_influence_budget(
    cfg: PointConfiguration, curve: TropicalCurveComplex, poly: LatticePolygon | None = None
) -> Certificate:
    """Check  sum m_i^2/2 <= sum area(Infl(P_i)) <= 2 area(poly)  term by term."""
    poly = poly or curve.polygon
    gp = is_general_position(cfg, poly)
    hyps = {"general_position": bool(gp)}
    if not gp:
        return Certificate(
            "influence_budget", False, hyps,
            reason=f"points {gp.indices} have cones meeting at {tuple(map(str, gp.point))}",
        )
    terms = []
    total = Fraction(0)
    lower_ok = True
    for p in cfg.points:
        a = influence_area(p.xy, curve, poly)
        total += a
        good = a >= Fraction(p.m * p.m, 2)
        lower_ok &= good
        terms.append({"label": p.label, "m": p.m, "influence_area": str(a), "at_least_m2_over_2": good})
    limit = 2 * area(poly)
    hyps["width >= max(m)"] = minimal_lattice_width(poly)[0] >= max(cfg.mults)
    ok = total <= limit
    return Certificate(
        "influence_budget",
        ok,
        hyps,
        terms,
        {"sum_influence": total, "limit": limit, "lower_bounds_hold": lower_ok},
    )


HORIZONTAL = (0, 1)


def verify_floor_certificate(
    cfg: PointConfiguration,
    curve: TropicalCurveComplex,
    line: tuple[Fraction, Fraction],
) -> Certificate:
    """Check  1/2 sum(m_i^2 - s_i^2) <= sum_i A_i <= area  and  sum s_i <= horizontal width.

    A_i is the total dual area of the vertices on the horizontal segment of
    the curve through P_i, the cell of P_i included.
    """
    poly = curve.polygon
    sv = s_values(cfg, curve, line)
    ys = [p.y for p in cfg.points]
    w, _ = minimal_lattice_width(poly)
    height = width_in_direction(poly, (0, 1))
    hyps = {
        "distinct_heights": len(set(ys)) == len(ys),
        "horizontal_width_is_minimal": width_in_direction(poly, (1, 0)) == w,
        "width >= max(m)": w >= max(cfg.mults),
        "slope < 1/height": Fraction(line[0]) < Fraction(1, max(height, 1)),
    }
    terms = []
    lower = Fraction(0)
    middle = Fraction(0)
    per_point_ok = True
    for p, s, kind in zip(cfg.points, sv.s, sv.kinds):
        a = directional_influence_area(p.xy, curve, HORIZONTAL, include_apex=True)
        need = Fraction(p.m * p.m - s * s, 2)
        lower += need
        middle += a
        per_point_ok &= a >= need
        terms.append({
            "label": p.label, "m": p.m, "s": s, "location": kind,
            "directional_area": str(a), "required": str(need), "ok": a >= need,
        })
    total_area = area(poly)
    ok = lower <= middle <= total_area and sv.ok
    return Certificate(
        "floor",
        ok,
        hyps,
        terms,
        {
            "half_sum_m2_minus_s2": lower,
            "sum_directional_areas": middle,
            "area": total_area,
            "sum_s": sum(sv.s),
            "path_extent": sv.path_extent,
            "horizontal_width": sv.horizontal_width,
            "per_point_ok": per_point_ok,
        },
    )
