from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from tropinfl.lattice import rectangle
from tropinfl.poly import Domain, Poly, parse_poly
from tropinfl.puiseux import BaseField, parse_scalar

Q = Domain(BaseField.rationals())
QT = Domain(BaseField.rationals(), laurent=True)
LP = Domain(BaseField.prime(32003), laurent=True)

polys = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-9, 9), max_size=6
).map(lambda d: Poly({k: Q(v) for k, v in d.items()}, Q))


def test_parse_and_expand():
    x, y = Poly.variable("x", Q), Poly.variable("y", Q)
    f = parse_poly("x^2 - 2*x*y + 1/2", Q)
    assert f == x * x - 2 * x * y + Poly.const(Fraction(1, 2), Q)
    assert parse_poly("x + x - 2*x", Q).is_zero()


def test_parse_laurent_coefficients():
    f = parse_poly("(t^-1+2)*x^2*y - 3*x + t*y^2 + 1", QT)
    assert f.coeffs[(2, 1)] == parse_scalar("t^-1 + 2", QT.base)
    assert f.coeffs[(0, 2)] == parse_scalar("t", QT.base)
    assert set(f.support) == {(2, 1), (1, 0), (0, 2), (0, 0)}


def test_domain_names():
    assert Domain.parse("F_32003[t,1/t]") == LP
    assert LP.name == "F_32003[t,1/t]"
    assert Domain.parse("Q") == Q


def test_newton_polygon():
    f = parse_poly("x*y^2 - x - y^2 + 1", Q)
    assert f.newton_polygon() == rectangle(1, 2)


@given(polys, polys, polys)
def test_polynomial_ring(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) ** 1 == b * a


@given(polys, st.integers(-3, 3), st.integers(-3, 3))
def test_evaluation_is_a_homomorphism(a, u, v):
    b = a * a + a
    assert b.evaluate(Q(u), Q(v)) == a.evaluate(Q(u), Q(v)) ** 2 + a.evaluate(Q(u), Q(v))


def test_json_round_trip():
    f = parse_poly("(t^-1+2)*x^2*y - 3*x + t*y^2 + 1", LP)
    assert Poly.from_json(f.to_json()) == f
