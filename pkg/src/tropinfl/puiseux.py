"""Laurent polynomials in ``t`` over Q or F_p, with the valuation val = -(least exponent).

This is the computable part of the Puiseux field F{{t}} that every point
construction in the package needs: coordinates are monomials ``t**(-x)`` and
linear algebra over them stays inside F[t, 1/t] through fraction-free
elimination.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np


class NotAUnit(ArithmeticError):
    """Division that does not stay inside the Laurent polynomial ring."""


class PoleAtZero(ArithmeticError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Fp:
    """Element of the prime field F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = int(v) % p
        self.p = p

    def _lift(self, other) -> int:
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixing elements of different prime fields")
            return other.v
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return int(other) % self.p

    def __add__(self, o):
        return Fp(self.v + self._lift(o), self.p)

    __radd__ = __add__

    def __sub__(self, o):
        return Fp(self.v - self._lift(o), self.p)

    def __rsub__(self, o):
        return Fp(self._lift(o) - self.v, self.p)

    def __mul__(self, o):
        return Fp(self.v * self._lift(o), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __truediv__(self, o):
        d = self._lift(o)
        if d == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(self.v * pow(d, -1, self.p), self.p)

    def __rtruediv__(self, o):
        return Fp(self._lift(o), self.p) / self

    def __pow__(self, e: int):
        if e < 0:
            return Fp(pow(pow(self.v, -1, self.p), -e, self.p), self.p)
        return Fp(pow(self.v, e, self.p), self.p)

    def __eq__(self, o):
        if isinstance(o, Fp):
            return self.p == o.p and self.v == o.v
        if isinstance(o, (int, Fraction)):
            return self.v == self._lift(o)
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


@dataclass(frozen=True)
class BaseField:
    """Either the rationals (``p is None``) or the prime field F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def rationals(cls) -> "BaseField":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "BaseField":
        return cls(p)

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"F_{self.p}"

    @classmethod
    def parse(cls, name: str) -> "BaseField":
        if name in ("Q", "QQ", "rationals"):
            return cls(None)
        m = re.fullmatch(r"F_?(\d+)", name)
        if not m:
            raise ValueError(f"unknown base field {name!r}")
        return cls(int(m.group(1)))

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def element(self, c) -> Union[Fraction, Fp]:
        """Field element (Fraction or Fp) from an int, Fraction, Fp or string."""
        if isinstance(c, str):
            c = Fraction(c)
        if self.p is None:
            if isinstance(c, Fp):
                raise ValueError("F_p element in a rational context")
            return Fraction(c)
        if isinstance(c, Fp):
            return c
        return Fp(0, self.p) + Fraction(c)

    # raw coefficient representation used inside PuiseuxScalar
    def _raw(self, c):
        if self.p is None:
            return Fraction(c) if not isinstance(c, Fp) else None
        if isinstance(c, Fp):
            return c.v
        c = Fraction(c)
        return c.numerator * pow(c.denominator, -1, self.p) % self.p

    def _dtype(self):
        if self.p is not None and self.p < (1 << 24):
            return np.int64
        return object


Scalar = Union["PuiseuxScalar", Fraction, Fp, int]


class PuiseuxScalar:
    """Laurent polynomial ``sum c_e t**e`` with finitely many integer exponents.

    Stored densely: ``low`` is the least exponent and ``coeffs[k]`` the
    coefficient of ``t**(low + k)``, with nonzero first and last entries.
    Zero has ``coeffs`` empty.
    """

    __slots__ = ("base", "low", "coeffs")

    def __init__(self, terms: dict | None = None, base: BaseField | None = None):
        base = base or BaseField()
        self.base = base
        terms = {int(e): base._raw(c) for e, c in (terms or {}).items()}
        terms = {e: c for e, c in terms.items() if c != 0}
        if not terms:
            self.low = 0
            self.coeffs = np.zeros(0, dtype=base._dtype())
            return
        lo, hi = min(terms), max(terms)
        arr = np.zeros(hi - lo + 1, dtype=base._dtype())
        if arr.dtype == object:
            arr[:] = [0 if base.p else Fraction(0)] * len(arr)
        for e, c in terms.items():
            arr[e - lo] = c
        self.low = lo
        self.coeffs = arr

    @classmethod
    def _from_dense(cls, base: BaseField, low: int, arr) -> "PuiseuxScalar":
        self = cls.__new__(cls)
        self.base = base
        if base.p is not None:
            arr = arr % base.p
        nz = np.flatnonzero(arr != 0)
        if len(nz) == 0:
            self.low = 0
            self.coeffs = np.zeros(0, dtype=base._dtype())
        else:
            self.low = low + int(nz[0])
            self.coeffs = arr[nz[0] : nz[-1] + 1].copy()
        return self

    @classmethod
    def constant(cls, c, base: BaseField) -> "PuiseuxScalar":
        return cls({0: c}, base)

    @classmethod
    def monomial(cls, c, e: int, base: BaseField) -> "PuiseuxScalar":
        return cls({e: c}, base)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[int, object]:
        return {
            self.low + k: self.base.element(c)
            for k, c in enumerate(self.coeffs)
            if c != 0
        }

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    @property
    def span(self) -> int:
        return len(self.coeffs)

    def valuation(self):
        return valuation(self)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "PuiseuxScalar":
        if isinstance(other, PuiseuxScalar):
            if other.base != self.base:
                raise ValueError("mixing Laurent polynomials over different fields")
            return other
        return PuiseuxScalar({0: other}, self.base)

    def __add__(self, other):
        other = self._coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.low, other.low)
        hi = max(self.high, other.high)
        arr = np.zeros(hi - lo + 1, dtype=self.coeffs.dtype)
        if arr.dtype == object:
            arr[:] = [self.coeffs[0] * 0] * len(arr)
        arr[self.low - lo : self.low - lo + self.span] += self.coeffs
        arr[other.low - lo : other.low - lo + other.span] += other.coeffs
        return PuiseuxScalar._from_dense(self.base, lo, arr)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxScalar._from_dense(self.base, self.low, -self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return PuiseuxScalar({}, self.base)
        arr = np.convolve(self.coeffs, other.coeffs)
        return PuiseuxScalar._from_dense(self.base, self.low + other.low, arr)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return scalar_inverse(self) ** (-e)
        result = PuiseuxScalar.constant(1, self.base)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __truediv__(self, other):
        return exact_divide(self, self._coerce(other))

    def __rtruediv__(self, other):
        return exact_divide(self._coerce(other), self)

    def __eq__(self, other):
        if not isinstance(other, PuiseuxScalar):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return (
            self.base == other.base
            and self.low == other.low
            and self.span == other.span
            and bool(np.all(self.coeffs == other.coeffs))
        )

    def __hash__(self):
        return hash((self.base, self.low, tuple(self.coeffs.tolist())))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"PuiseuxScalar({format_scalar(self)!r}, {self.base.name})"

    def __str__(self):
        return format_scalar(self)


def valuation(x: PuiseuxScalar) -> float | int:
    """val(sum c_a t^a) = -min{a : c_a != 0}; val(0) = -inf."""
    if x.is_zero():
        return -math.inf
    return -x.low


def add(x: PuiseuxScalar, y: PuiseuxScalar) -> PuiseuxScalar:
    return x + y


def mul(x: PuiseuxScalar, y: PuiseuxScalar) -> PuiseuxScalar:
    return x * y


def negate(x: PuiseuxScalar) -> PuiseuxScalar:
    return -x


def scalar_inverse(x: PuiseuxScalar) -> PuiseuxScalar:
    """Inverse of a unit of F[t, 1/t]; units are exactly the nonzero monomials."""
    if not x.is_monomial():
        raise NotAUnit(f"{x} is not a unit of the Laurent polynomial ring")
    c = x.base.element(x.coeffs[0])
    return PuiseuxScalar({-x.low: 1 / c}, x.base)


def exact_divide(num: PuiseuxScalar, den: PuiseuxScalar) -> PuiseuxScalar:
    """Quotient num/den, raising NotAUnit unless den divides num in F[t, 1/t]."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if num.is_zero():
        return num
    base = num.base
    if den.is_monomial():
        inv = scalar_inverse(den)
        return num * inv
    n = num.coeffs.copy()
    d = den.coeffs
    qlen = len(n) - len(d) + 1
    if qlen <= 0:
        raise NotAUnit(f"{den} does not divide {num}")
    if base.p is not None and n.dtype != object and qlen > 48:
        q = _series_quotient(n, d, qlen, base.p)
        check = np.convolve(q, d) % base.p
        if len(check) != len(n) or np.any(check != n % base.p):
            raise NotAUnit(f"{den} does not divide {num}")
        return PuiseuxScalar._from_dense(base, num.low - den.low, q)
    lead_inv = 1 / base.element(d[0])
    lead_raw = base._raw(lead_inv)
    q = np.zeros(qlen, dtype=n.dtype)
    if q.dtype == object:
        q[:] = [n[0] * 0] * qlen
    p = base.p
    for k in range(qlen):
        c = n[k]
        if p is not None:
            c = c % p
        if c == 0:
            continue
        qc = c * lead_raw
        if p is not None:
            qc %= p
        q[k] = qc
        n[k : k + len(d)] -= qc * d
        if p is not None:
            n[k : k + len(d)] %= p
    rest = n[qlen:]
    if p is not None:
        rest = rest % p
    if np.any(rest != 0):
        raise NotAUnit(f"{den} does not divide {num}")
    return PuiseuxScalar._from_dense(base, num.low - den.low, q)


def _series_quotient(n: np.ndarray, d: np.ndarray, qlen: int, p: int) -> np.ndarray:
    """First qlen coefficients of n/d as power series mod p (Newton inversion of d)."""
    inv = np.array([pow(int(d[0]), -1, p)], dtype=np.int64)
    prec = 1
    while prec < qlen:
        prec = min(2 * prec, qlen)
        e = np.convolve(d[:prec], inv)[:prec] % p
        e = (-e) % p
        e[0] = (e[0] + 2) % p
        inv = np.convolve(inv, e)[:prec] % p
    return np.convolve(n[:qlen], inv)[:qlen] % p


def specialize(x: PuiseuxScalar, a):
    """Substitute t = a, returning an element of the base field."""
    base = x.base
    a = base.element(a)
    if x.is_zero():
        return base.element(0)
    if x.low < 0 and a == 0:
        raise PoleAtZero(f"cannot substitute t = 0 into {x}")
    if base.p is not None:
        p = base.p
        av = a.v
        # Horner on the dense coefficient vector, then shift by a^low
        acc = 0
        for c in reversed(x.coeffs.tolist()):
            acc = (acc * av + c) % p
        if x.low >= 0:
            shift = pow(av, x.low, p)
        else:
            shift = pow(pow(av, -1, p), -x.low, p)
        return Fp(acc * shift, p)
    acc = Fraction(0)
    for c in reversed(x.coeffs.tolist()):
        acc = acc * a + c
    return acc * a**x.low


_TERM = re.compile(
    r"^\s*(?P<c>[+-]?\s*\d+(?:/\d+)?)?\s*\*?\s*(?P<t>t(?:\s*\^\s*\(?\s*(?P<e>[+-]?\d+)\s*\)?)?)?\s*$"
)


def parse_scalar(text: str, base: BaseField) -> PuiseuxScalar:
    """Parse ``"c1*t^e1 + c2*t^e2 + ..."`` (exponents may be negative)."""
    s = text.replace(" ", "")
    if s in ("", "0"):
        return PuiseuxScalar({}, base)
    # split on +/- that are not inside an exponent
    pieces = []
    depth = 0
    cur = ""
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur and not cur.endswith("^"):
            pieces.append(cur)
            cur = ch
        else:
            cur += ch
    pieces.append(cur)
    terms: dict[int, Fraction] = {}
    for piece in pieces:
        sign = 1
        if piece.startswith("+"):
            piece = piece[1:]
        elif piece.startswith("-"):
            sign, piece = -1, piece[1:]
        m = _TERM.match(piece)
        if not m or (m.group("c") is None and m.group("t") is None):
            raise ValueError(f"cannot parse term {piece!r} in {text!r}")
        c = Fraction(m.group("c")) if m.group("c") else Fraction(1)
        if m.group("t"):
            e = int(m.group("e")) if m.group("e") is not None else 1
        else:
            e = 0
        terms[e] = terms.get(e, Fraction(0)) + sign * c
    return PuiseuxScalar(terms, base)


def format_scalar(x: PuiseuxScalar) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for e, c in sorted(x.terms.items()):
        c = Fraction(int(c)) if isinstance(c, Fp) else c
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            tpart = "t" if e == 1 else f"t^{e}" if e > 0 else f"t^({e})"
            body = tpart if mag == 1 else f"{mag}*{tpart}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)
