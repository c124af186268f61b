"""Bivariate (Laurent) polynomials with coefficients in Q, F_p or F[t, 1/t]."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .lattice import LatticePolygon, convex_hull
from .puiseux import BaseField, PuiseuxScalar, format_scalar, parse_scalar


@dataclass(frozen=True)
class Domain:
    """Scalar ring for linear algebra: a base field, optionally extended by t^(+-1)."""

    base: BaseField
    laurent: bool = False

    @classmethod
    def parse(cls, name: str) -> "Domain":
        name = name.strip()
        if name.endswith("[t]") or name.endswith("[t,1/t]") or name.endswith("(t)"):
            return cls(BaseField.parse(name.split("[")[0].split("(")[0]), True)
        return cls(BaseField.parse(name))

    @property
    def name(self) -> str:
        return self.base.name + ("[t,1/t]" if self.laurent else "")

    def __call__(self, c):
        if self.laurent:
            if isinstance(c, PuiseuxScalar):
                return c
            if isinstance(c, str):
                return parse_scalar(c, self.base)
            return PuiseuxScalar.constant(c, self.base)
        if isinstance(c, str):
            c = Fraction(c)
        return self.base.element(c)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def t_power(self, e: int):
        if not self.laurent:
            raise ValueError(f"{self.name} has no formal variable t")
        return PuiseuxScalar.monomial(1, e, self.base)

    def random_element(self, rng: random.Random):
        """Random nonzero base-field constant."""
        if self.base.p is None:
            return self(rng.randint(1, 97) * rng.choice((1, -1)))
        return self(rng.randint(1, self.base.p - 1))

    def is_unit(self, c) -> bool:
        if self.laurent:
            return c.is_monomial()
        return c != 0

    def format(self, c) -> str:
        if isinstance(c, PuiseuxScalar):
            return format_scalar(c)
        return str(c)

    def size(self, c) -> int:
        """Heuristic size used for pivot selection (smaller is better)."""
        if isinstance(c, PuiseuxScalar):
            return c.span
        if isinstance(c, Fraction):
            return c.numerator.bit_length() + c.denominator.bit_length()
        return 0


class Poly:
    """Finite map from exponent pairs (i, j) to nonzero domain scalars."""

    __slots__ = ("domain", "coeffs")

    def __init__(self, coeffs: Mapping[tuple[int, int], object], domain: Domain):
        self.domain = domain
        self.coeffs = {
            (int(i), int(j)): domain(c) for (i, j), c in coeffs.items() if c != 0
        }
        self.coeffs = {k: c for k, c in self.coeffs.items() if c != 0}

    @classmethod
    def from_vector(
        cls, support: Iterable[tuple[int, int]], vector, domain: Domain
    ) -> "Poly":
        return cls(dict(zip(support, vector)), domain)

    @classmethod
    def variable(cls, name: str, domain: Domain) -> "Poly":
        return cls({(1, 0) if name == "x" else (0, 1): 1}, domain)

    @classmethod
    def const(cls, c, domain: Domain) -> "Poly":
        return cls({(0, 0): c}, domain)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def support(self) -> list[tuple[int, int]]:
        return sorted(self.coeffs)

    def newton_polygon(self) -> LatticePolygon:
        if not self.coeffs:
            raise ValueError("zero polynomial has no Newton polygon")
        return convex_hull(self.coeffs)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(other, self.domain)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return Poly(out, self.domain)

    __radd__ = __add__

    def __neg__(self):
        return Poly({k: -c for k, c in self.coeffs.items()}, self.domain)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for (i, j), a in self.coeffs.items():
            for (k, l), b in other.coeffs.items():
                key = (i + k, j + l)
                out[key] = out[key] + a * b if key in out else a * b
        return Poly(out, self.domain)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = Poly.const(1, self.domain)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def scale(self, c) -> "Poly":
        return Poly({k: v * c for k, v in self.coeffs.items()}, self.domain)

    def shift(self, a: int, b: int) -> "Poly":
        """Multiply by the monomial x^a y^b."""
        return Poly({(i + a, j + b): c for (i, j), c in self.coeffs.items()}, self.domain)

    def evaluate(self, x, y):
        total = self.domain.zero()
        for (i, j), c in self.coeffs.items():
            total = total + c * x**i * y**j
        return total

    def map_coeffs(self, fn, domain: Domain) -> "Poly":
        return Poly({k: fn(c) for k, c in self.coeffs.items()}, domain)

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, {self.domain.name})"

    def __str__(self):
        return format_poly(self)

    def to_json(self) -> dict:
        return {
            "domain": self.domain.name,
            "terms": [[i, j, self.domain.format(c)] for (i, j), c in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Poly":
        domain = Domain.parse(data.get("domain", "Q"))
        return cls({(int(i), int(j)): domain(str(c)) for i, j, c in data["terms"]}, domain)


def format_poly(f: Poly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for (i, j), c in sorted(f.coeffs.items()):
        mono = "*".join(
            s
            for s in (
                "" if i == 0 else ("x" if i == 1 else f"x^{i}"),
                "" if j == 0 else ("y" if j == 1 else f"y^{j}"),
            )
            if s
        )
        coeff = f.domain.format(c)
        if isinstance(c, PuiseuxScalar) and not c.is_monomial():
            coeff = f"({coeff})"
        if not mono:
            parts.append(coeff)
        elif coeff == "1":
            parts.append(mono)
        else:
            parts.append(f"{coeff}*{mono}")
    return " + ".join(parts)


def _split_top(s: str, seps: str, keep_sign: bool) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        depth += (ch == "(") - (ch == ")")
        if ch in seps and depth == 0 and not (keep_sign and (not cur or cur.endswith("^"))):
            out.append(cur)
            cur = ch if keep_sign else ""
        else:
            cur += ch
    out.append(cur)
    return out


def parse_poly(text: str, domain: Domain) -> Poly:
    """Parse e.g. ``"(t^-1+2)*x^2*y - 3*x + t*y^2 + 1"``.

    Coefficients are parenthesized scalars, plain numbers or powers of t.
    """
    s = text.replace(" ", "")
    coeffs: dict[tuple[int, int], object] = {}
    for term in _split_top(s, "+-", keep_sign=True):
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("+-")
        if not term:
            raise ValueError(f"empty term in {text!r}")
        i = j = 0
        c = domain.one()
        for factor in _split_top(term, "*", keep_sign=False):
            var, _, e = factor.partition("^")
            if var in ("x", "y"):
                k = int(e) if e else 1
                if var == "x":
                    i += k
                else:
                    j += k
            else:
                if factor.startswith("(") and factor.endswith(")"):
                    factor = factor[1:-1]
                c = c * domain(factor)
        if sign < 0:
            c = -c
        coeffs[(i, j)] = coeffs.get((i, j), domain.zero()) + c
    return Poly(coeffs, domain)
