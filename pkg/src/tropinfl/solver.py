"""Linear systems imposing point multiplicities on plane curves, and their exact solution.

A point p has multiplicity >= m on F = sum a_ij x^i y^j exactly when every
coefficient of total degree < m in F(x + p1, y + p2) vanishes.  Each such
coefficient is the linear form

    sum_ij  C(i, a) C(j, b) p1^(i - a) p2^(j - b) a_ij,

which holds verbatim in every characteristic.  Elimination is fraction-free,
so the same code runs over Q, F_p and the Laurent ring F[t, 1/t].
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bounds import expected_dimension_polygon
from .lattice import LatticePolygon, triangle
from .poly import Domain, Poly
from .puiseux import BaseField, Fp, NotAUnit, PuiseuxScalar, specialize


class InvalidPoint(ValueError):
    pass


def gbinom(n: int, k: int) -> int:
    """Binomial coefficient C(n, k) for any integer n (series expansion of (1+x)^n)."""
    if k < 0:
        return 0
    if n >= 0 and k > n:
        return 0
    num = 1
    for r in range(k):
        num *= n - r
    den = 1
    for r in range(2, k + 1):
        den *= r
    return num // den


def local_monomials(m: int) -> list[tuple[int, int]]:
    """Exponents (a, b) with a + b < m, by total degree then a."""
    return [(a, k - a) for k in range(m) for a in range(k, -1, -1)]


@dataclass
class MultiplicitySystem:
    domain: Domain
    support: list[tuple[int, int]]
    rows: list[list]
    provenance: list[tuple[int, int, tuple[int, int]]]
    points: list[tuple]
    mults: list[int]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.support)

    def to_json(self) -> dict:
        fmt = self.domain.format
        return {
            "domain": self.domain.name,
            "support": [list(s) for s in self.support],
            "points": [[fmt(c) for c in p] for p in self.points],
            "mults": list(self.mults),
            "rows": [[fmt(c) for c in row] for row in self.rows],
            "provenance": [
                {"point": i, "m": m, "monomial": list(ab)} for i, m, ab in self.provenance
            ],
        }


def _power(cache: dict, base, e: int, domain: Domain):
    key = (id(base), e)
    if key not in cache:
        if e < 0 and not domain.is_unit(base):
            raise InvalidPoint(f"coordinate {domain.format(base)} is not invertible")
        try:
            cache[key] = base**e
        except (NotAUnit, ZeroDivisionError) as exc:
            raise InvalidPoint(str(exc)) from exc
    return cache[key]


def multiplicity_system(
    support: LatticePolygon | Sequence[tuple[int, int]],
    conditions: Sequence[tuple[Sequence, int]],
    domain: Domain,
) -> MultiplicitySystem:
    """Rows asserting mult_p(F) >= m for each (p, m), columns indexed by ``support``."""
    if isinstance(support, LatticePolygon):
        support = list(support.lattice_points)
    support = [tuple(s) for s in support]
    rows, prov, points, mults = [], [], [], []
    cache: dict = {}
    for idx, (p, m) in enumerate(conditions):
        p1, p2 = domain(p[0]), domain(p[1])
        points.append((p1, p2))
        mults.append(m)
        for a, b in local_monomials(m):
            row = []
            for i, j in support:
                c = gbinom(i, a) * gbinom(j, b)
                if c == 0:
                    row.append(domain.zero())
                    continue
                row.append(domain(c) * _power(cache, p1, i - a, domain) * _power(cache, p2, j - b, domain))
            rows.append(row)
            prov.append((idx, m, (a, b)))
    return MultiplicitySystem(domain, support, rows, prov, points, mults)


@dataclass
class SolveReport:
    rank: int
    kernel_dim: int
    kernel: list[list]
    pivot_columns: list[int]
    pivot_rows: list[int]
    minor: object
    domain: Domain

    def minor_degrees(self) -> tuple[int, int] | None:
        """(lowest, highest) t-exponent of the pivot minor, over a Laurent ring."""
        if isinstance(self.minor, PuiseuxScalar) and not self.minor.is_zero():
            return self.minor.low, self.minor.high
        return None

    def to_json(self) -> dict:
        fmt = self.domain.format
        return {
            "domain": self.domain.name,
            "rank": self.rank,
            "kernel_dim": self.kernel_dim,
            "kernel": [[fmt(c) for c in v] for v in self.kernel],
            "pivot_columns": self.pivot_columns,
            "pivot_rows": self.pivot_rows,
            "minor_degrees": self.minor_degrees(),
        }


def eliminate(matrix: Sequence[Sequence], domain: Domain, ncols: int | None = None) -> SolveReport:
    """Fraction-free Gauss-Jordan elimination.

    After step k every entry is a (k+1)-minor of the input, so the division
    by the previous pivot is exact in any integral domain.  The final pivots
    all equal the same minor D, and the kernel has basis vectors with D in
    one free column and minus the reduced entries in the pivot columns.
    """
    A = [list(r) for r in matrix]
    nrows = len(A)
    ncols = len(A[0]) if A else (ncols or 0)
    order = list(range(nrows))
    prev = domain.one()
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        cands = [i for i in range(r, nrows) if A[i][c] != 0]
        if not cands:
            continue
        best = min(cands, key=lambda i: (domain.size(A[i][c]), i))
        A[r], A[best] = A[best], A[r]
        order[r], order[best] = order[best], order[r]
        piv = A[r][c]
        prow = A[r]
        for i in range(nrows):
            if i == r:
                continue
            row = A[i]
            f = row[c]
            if f == 0:
                # (piv * a - 0) / prev
                if piv != prev:
                    for j in range(ncols):
                        if row[j] != 0:
                            row[j] = row[j] * piv / prev
                continue
            for j in range(ncols):
                if j == c:
                    continue
                row[j] = (piv * row[j] - f * prow[j]) / prev
            row[c] = domain.zero()
        pivots.append(c)
        prev = piv
        r += 1
    rank = len(pivots)
    D = prev
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for f in free:
        v = [domain.zero()] * ncols
        v[f] = D
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][f]
        kernel.append(_normalize(v, domain))
    return SolveReport(rank, ncols - rank, kernel, pivots, sorted(order[:rank]), D, domain)


def _normalize(v: list, domain: Domain) -> list:
    nz = [c for c in v if c != 0]
    if not nz:
        return v
    if domain.laurent:
        low = min(c.low for c in nz)
        if low:
            shift = domain.t_power(-low)
            v = [c * shift for c in v]
        return v
    if domain.base.p is None:
        from math import gcd, lcm

        den = lcm(*(Fraction(c).denominator for c in nz))
        ints = [int(Fraction(c) * den) for c in v]
        g = 0
        for x in ints:
            g = gcd(g, x)
        lead = next(x for x in ints if x)
        g = g if lead > 0 else -g
        return [domain(Fraction(x, g)) for x in ints]
    inv = 1 / nz[0]
    return [c * inv for c in v]


def solve(system: MultiplicitySystem) -> SolveReport:
    return eliminate(system.rows, system.domain, ncols=len(system.support))


def matrix_rank(matrix: Sequence[Sequence], domain: Domain) -> int:
    return eliminate(matrix, domain).rank


@dataclass
class CurveResult:
    poly: Poly | None
    exact_polygon: bool
    attempts: int
    report: SolveReport

    @property
    def found(self) -> bool:
        return self.poly is not None


def curve_through(
    target: LatticePolygon,
    conditions: Sequence[tuple[Sequence, int]],
    domain: Domain,
    seed: int = 0,
    retries: int = 20,
) -> CurveResult:
    """A curve with the prescribed multiplicities, preferring Newton polygon exactly ``target``."""
    system = multiplicity_system(target, conditions, domain)
    report = solve(system)
    if report.kernel_dim == 0:
        return CurveResult(None, False, 0, report)
    rng = random.Random(seed)
    best = None
    for attempt in range(1, retries + 1):
        if report.kernel_dim == 1:
            vec = report.kernel[0]
        else:
            coeffs = [domain.random_element(rng) for _ in report.kernel]
            vec = [domain.zero()] * len(system.support)
            for c, k in zip(coeffs, report.kernel):
                vec = [a + c * b for a, b in zip(vec, k)]
        f = Poly.from_vector(system.support, vec, domain)
        if f.is_zero():
            continue
        if f.newton_polygon() == target:
            return CurveResult(f, True, attempt, report)
        if best is None:
            best = f
        if report.kernel_dim == 1:
            break
    return CurveResult(best, False, retries, report)


def _translate_coeffs(f: Poly, p1, p2) -> dict[tuple[int, int], object]:
    """Coefficients of F(x + p1, y + p2), by expanding the binomial powers directly."""
    dom = f.domain
    maxi = max(i for i, _ in f.coeffs)
    maxj = max(j for _, j in f.coeffs)

    def powers(shift, top):
        # coefficient lists of (z + shift)^k, k = 0..top
        out = [[dom.one()]]
        for _ in range(top):
            prev = out[-1]
            nxt = [dom.zero()] * (len(prev) + 1)
            for k, c in enumerate(prev):
                nxt[k + 1] = nxt[k + 1] + c
                nxt[k] = nxt[k] + c * shift
            out.append(nxt)
        return out

    px, py = powers(p1, maxi), powers(p2, maxj)
    g: dict = {}
    for (i, j), a in f.coeffs.items():
        for al, cx in enumerate(px[i]):
            if cx == 0:
                continue
            for be, cy in enumerate(py[j]):
                if cy == 0:
                    continue
                key = (al, be)
                g[key] = g[key] + a * cx * cy if key in g else a * cx * cy
    return g


def multiplicity_of(f: Poly, p: Sequence) -> int:
    """Largest m such that all translated coefficients of degree < m vanish."""
    if f.is_zero():
        raise ValueError("multiplicity of the zero polynomial is undefined")
    dom = f.domain
    p1, p2 = dom(p[0]), dom(p[1])
    lo_i = min(i for i, _ in f.coeffs)
    lo_j = min(j for _, j in f.coeffs)
    if lo_i < 0 or lo_j < 0:
        # x^a y^b is a unit near p when both coordinates are
        if not (dom.is_unit(p1) and dom.is_unit(p2)):
            raise InvalidPoint("Laurent polynomial at a point off the torus")
        f = f.shift(-min(lo_i, 0), -min(lo_j, 0))
    g = _translate_coeffs(f, p1, p2)
    degrees = [a + b for (a, b), c in g.items() if c != 0]
    return min(degrees)


@dataclass
class DetropResult:
    a: object | None
    report: SolveReport | None
    laurent_report: SolveReport
    rejected: list[int] = field(default_factory=list)

    @property
    def exhausted(self) -> bool:
        return self.a is None

    def to_json(self) -> dict:
        return {
            "a": None if self.a is None else int(self.a),
            "exhausted": self.exhausted,
            "rejected": self.rejected,
            "laurent_rank": self.laurent_report.rank,
            "laurent_kernel_dim": self.laurent_report.kernel_dim,
            "minor_degrees": self.laurent_report.minor_degrees(),
            "specialized": None if self.report is None else self.report.to_json(),
        }


def specialize_matrix(rows: Sequence[Sequence[PuiseuxScalar]], a) -> list[list]:
    return [[specialize(c, a) for c in row] for row in rows]


def detropicalize(
    rows: Sequence[Sequence[PuiseuxScalar]],
    base: BaseField,
    laurent_report: SolveReport | None = None,
    candidates: Sequence[int] | None = None,
) -> DetropResult:
    """Find the least nonzero a in F_p for which t = a preserves the rank."""
    if base.p is None:
        raise ValueError("detropicalization searches a finite prime field")
    domain = Domain(base, laurent=True)
    field_dom = Domain(base)
    rows = [list(r) for r in rows]
    if laurent_report is None:
        laurent_report = eliminate(rows, domain)
    rejected = []
    for a in candidates if candidates is not None else range(1, base.p):
        spec = specialize_matrix(rows, Fp(a, base.p))
        rep = eliminate(spec, field_dom, ncols=len(rows[0]) if rows else 0)
        if rep.rank == laurent_report.rank:
            return DetropResult(Fp(a, base.p), rep, laurent_report, rejected)
        rejected.append(a)
    return DetropResult(None, None, laurent_report, rejected)


def detropicalize_system(system: MultiplicitySystem, laurent_report: SolveReport | None = None) -> DetropResult:
    if not system.domain.laurent:
        raise ValueError("system is not over a Laurent ring")
    return detropicalize(system.rows, system.domain.base, laurent_report)


@dataclass
class DimensionReport:
    actual: int
    expected: int
    report: SolveReport

    @property
    def excess(self) -> int:
        return self.actual - self.expected

    def to_json(self) -> dict:
        return {"actual": self.actual, "expected": self.expected, "excess": self.excess}


def dimension_report(
    target: LatticePolygon | int,
    conditions: Sequence[tuple[Sequence, int]],
    domain: Domain,
) -> DimensionReport:
    """Projective dimension of the linear system versus the naive count."""
    poly = triangle(target) if isinstance(target, int) else target
    system = multiplicity_system(poly, conditions, domain)
    rep = solve(system)
    expected = expected_dimension_polygon(poly, [m for _, m in conditions])
    return DimensionReport(rep.kernel_dim - 1, expected, rep)


def laurent_point(x: int, y: int, base: BaseField) -> tuple[PuiseuxScalar, PuiseuxScalar]:
    """The point (t^-x, t^-y), whose valuation is (x, y)."""
    return (PuiseuxScalar.monomial(1, -x, base), PuiseuxScalar.monomial(1, -y, base))
