"""Evaluation codes from jets of curves with prescribed multiplicities.

A polynomial F with support in D is sent to its Taylor data of order < m
at n points.  When no curve with Newton polygon D has multiplicity m at all
the points, this map is injective and its image is a linear code of length
n m(m+1)/2 and dimension |D ∩ Z^2|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .lattice import LatticePolygon, area, minimal_lattice_width, rectangle
from .bounds import uniform_bound
from .poly import Domain
from .position import floor_points
from .puiseux import BaseField, Fp
from .solver import (
    detropicalize,
    eliminate,
    laurent_point,
    multiplicity_system,
)

DEFAULT_CAP = 2**22


class DuplicatePoint(ValueError):
    pass


class CertificationFailed(RuntimeError):
    def __init__(self, message: str, witness: list | None = None):
        super().__init__(message)
        self.witness = witness


class Exhausted(RuntimeError):
    pass


class TooLarge(ValueError):
    pass


@dataclass
class Feasibility:
    """Truth value of  dN < 1/2 (n - d/m - 1) m^2  with its hypothesis m <= min(N, d)."""

    ok: bool
    hypotheses: dict[str, bool]
    lhs: Fraction
    rhs: Fraction

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "feasible": self.ok,
            "hypotheses": dict(self.hypotheses),
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
        }


def feasibility(d: int, N: int, n: int, m: int) -> Feasibility:
    if m <= 0:
        raise ValueError("multiplicity must be positive")
    lhs = Fraction(d * N)
    rhs = (n - Fraction(d, m) - 1) * m * m / 2
    return Feasibility(lhs < rhs, {"m <= min(N, d)": m <= min(N, d)}, lhs, rhs)


def jet_matrix(
    support: LatticePolygon | Sequence[tuple[int, int]],
    points: Sequence[Sequence],
    m: int,
    base: BaseField,
) -> list[list[Fp]]:
    """Rows (point, local monomial of degree < m), columns the lattice points of the support."""
    domain = Domain(base)
    pts = [tuple(domain(c) for c in p) for p in points]
    if len(set(pts)) != len(pts):
        raise DuplicatePoint("jet matrix needs distinct points")
    return multiplicity_system(support, [(p, m) for p in pts], domain).rows


@dataclass
class LinearCode:
    p: int
    generator: list[list[int]]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        widths = {len(r) for r in self.generator}
        if len(widths) > 1:
            raise ValueError("generator rows have different lengths")
        self.generator = [[int(c) % self.p for c in r] for r in self.generator]
        if self.rank() != len(self.generator):
            raise ValueError("generator matrix does not have full row rank")

    @property
    def length(self) -> int:
        return len(self.generator[0]) if self.generator else 0

    @property
    def dimension(self) -> int:
        return len(self.generator)

    def rank(self) -> int:
        if not self.generator:
            return 0
        base = BaseField.prime(self.p)
        rows = [[base.element(c) for c in r] for r in self.generator]
        return eliminate(rows, Domain(base), ncols=self.length).rank

    def to_text(self) -> str:
        lines = [f"# p={self.p} length={self.length} dimension={self.dimension}"]
        lines += [" ".join(str(c) for c in r) for r in self.generator]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, p: int | None = None) -> "LinearCode":
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if line.startswith("#"):
                for tok in line[1:].split():
                    key, _, val = tok.partition("=")
                    if key == "p" and p is None:
                        p = int(val)
            elif line:
                rows.append([int(c) for c in line.split()])
        if p is None:
            raise ValueError("prime not given and no '# p=' header")
        return cls(p, rows)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "length": self.length,
            "dimension": self.dimension,
            "generator": self.generator,
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LinearCode":
        return cls(int(data["p"]), data["generator"], dict(data.get("provenance", {})))


@dataclass
class Infeasible:
    reason: str
    feasibility: dict

    def to_json(self) -> dict:
        return {"infeasible": True, "reason": self.reason, "feasibility": self.feasibility}


def _rectangle_dims(poly: LatticePolygon) -> tuple[int, int] | None:
    x0, y0, x1, y1 = poly.bbox()
    if poly == rectangle(x1 - x0, y1 - y0).translate((x0, y0)):
        return x1 - x0, y1 - y0
    return None


def code_feasibility(poly: LatticePolygon, n: int, m: int) -> Feasibility:
    """The rectangle criterion for boxes; area < uniform bound for other polygons."""
    dims = _rectangle_dims(poly)
    if dims is not None:
        return feasibility(dims[0], dims[1], n, m)
    w, _ = minimal_lattice_width(poly)
    hyp = {"m <= width": 0 < m <= w}
    if not hyp["m <= width"]:
        return Feasibility(False, hyp, area(poly), Fraction(0))
    rhs = uniform_bound(n, m, w)
    return Feasibility(area(poly) < rhs, hyp, area(poly), rhs)


def build_code(poly: LatticePolygon, n: int, m: int, p: int = 32003) -> LinearCode | Infeasible:
    """Certify that no curve with polygon ``poly`` has n points of multiplicity m and return the code.

    Points sit on a floor configuration at (t^-x, t^-y); the Laurent
    system is specialized at the least a keeping its rank, and the jet
    matrix at (a^-x, a^-y) is checked to have full column rank.
    """
    feas = code_feasibility(poly, n, m)
    if not feas:
        reason = "hypothesis failed" if not all(feas.hypotheses.values()) else "nonexistence inequality fails"
        return Infeasible(reason, feas.to_json())
    base = BaseField.prime(p)
    floor = floor_points(n, [m] * n, poly)
    image = floor.polygon
    laurent = Domain(base, laurent=True)
    conds = [(laurent_point(x, y, base), m) for x, y in floor.config.coords]
    system = multiplicity_system(image, conds, laurent)
    ncols = system.shape[1]
    coords = floor.config.coords

    def distinct(a: int) -> bool:
        # a must also keep the specialized points apart
        q = [(pow(a, -x, p), pow(a, -y, p)) for x, y in coords]
        return len(set(q)) == len(q)

    det = detropicalize(system.rows, base, candidates=(a for a in range(1, p) if distinct(a)))
    lrep = det.laurent_report
    if lrep.kernel_dim:
        raise CertificationFailed(
            "a curve with these multiplicities exists over the Laurent ring",
            [laurent.format(c) for c in lrep.kernel[0]],
        )
    if det.exhausted:
        raise Exhausted(f"every a in F_{p}^* drops the rank or merges two points")
    a = det.a
    pts = [(a ** (-x), a ** (-y)) for x, y in floor.config.coords]
    jet = jet_matrix(image, pts, m, base)
    rep = eliminate(jet, Domain(base), ncols=ncols)
    if rep.rank != ncols:
        raise CertificationFailed("specialized jet matrix has a kernel", [int(c) for c in rep.kernel[0]])
    generator = [[int(jet[r][c]) for r in range(len(jet))] for c in range(ncols)]
    provenance = {
        "polygon": poly.to_json(),
        "normalized_polygon": image.to_json(),
        "points": [list(xy) for xy in floor.config.coords],
        "m": m,
        "a": int(a),
        "rejected_a": det.rejected,
        "field_points": [[int(c) for c in q] for q in pts],
        "columns": [list(s) for s in system.support],
        "feasibility": feas.to_json(),
    }
    return LinearCode(p, generator, provenance)


def min_distance_bruteforce(code: LinearCode, cap: int = DEFAULT_CAP, chunk: int = 1 << 16) -> int:
    """Least Hamming weight of a nonzero codeword, by enumeration.

    Scaling preserves weight, so only messages whose first nonzero entry
    is 1 are tried.
    """
    k, p = code.dimension, code.p
    if k == 0:
        raise ValueError("dimension-0 code has no nonzero codewords")
    if p**k > cap:
        raise TooLarge(f"{p}^{k} codewords exceed the cap {cap}")
    G = np.array(code.generator, dtype=np.int64)
    best = code.length
    for lead in range(k):
        rest = k - lead - 1
        powers = p ** np.arange(rest, dtype=np.int64)
        total = p**rest
        for start in range(0, total, chunk):
            idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
            digits = (idx[:, None] // powers) % p
            cw = (G[lead] + digits @ G[lead + 1 :]) % p
            best = min(best, int(np.count_nonzero(cw, axis=1).min()))
    return best
