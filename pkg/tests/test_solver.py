import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _instances import LAURENT, Q, squared_conic_check
from tropinfl.lattice import rectangle, triangle
from tropinfl.poly import Domain, Poly, parse_poly
from tropinfl.puiseux import BaseField, PuiseuxScalar, parse_scalar
from tropinfl.solver import (
    InvalidPoint,
    curve_through,
    detropicalize,
    detropicalize_system,
    dimension_report,
    eliminate,
    gbinom,
    laurent_point,
    local_monomials,
    matrix_rank,
    multiplicity_of,
    multiplicity_system,
    solve,
)

F2 = Domain(BaseField.prime(2))
F5 = BaseField.prime(5)


def test_gbinom():
    for n in range(8):
        for k in range(-1, 10):
            assert gbinom(n, k) == (comb(n, k) if k >= 0 else 0)
    assert gbinom(-1, 3) == -1
    assert gbinom(-2, 2) == 3
    assert local_monomials(2) == [(0, 0), (1, 0), (0, 1)]


def test_double_point_on_conics():
    sys = multiplicity_system(triangle(2), [((1, 2), 2)], Q)
    assert sys.shape == (3, 6)
    rep = solve(sys)
    assert rep.rank == 3 and rep.kernel_dim == 3
    for v in rep.kernel:
        assert multiplicity_of(Poly.from_vector(sys.support, v, Q), (1, 2)) >= 2


def test_characteristic_two_rows():
    # (x + 1)^2 = x^2 + 1 over F_2 is double at x = 1 along a line
    f = parse_poly("x^2 + 1", F2)
    assert multiplicity_of(f, (1, 0)) == 2
    sys = multiplicity_system(triangle(3), [((1, 1), 3)], F2)
    rep = solve(sys)
    assert rep.kernel_dim == 10 - 6
    for v in rep.kernel:
        assert multiplicity_of(Poly.from_vector(sys.support, v, F2), (1, 1)) >= 3


@given(
    st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=1, max_size=3, unique=True),
    st.lists(st.integers(1, 3), min_size=3, max_size=3),
    st.integers(1, 4),
)
@settings(max_examples=40, deadline=None)
def test_kernel_elements_have_the_multiplicities(pts, ms, d):
    conds = list(zip(pts, ms))
    sys = multiplicity_system(triangle(d), conds, Q)
    rep = solve(sys)
    assert rep.rank + rep.kernel_dim == len(sys.support)
    for v in rep.kernel:
        f = Poly.from_vector(sys.support, v, Q)
        for p, m in conds:
            assert multiplicity_of(f, p) >= m


def test_line_taken_with_multiplicity():
    # two triple points: the cubed line survives although the count predicts nothing
    conds = [((0, 0), 3), ((1, 1), 3)]
    assert solve(multiplicity_system(triangle(2), conds, Q)).kernel_dim == 0
    r = dimension_report(3, conds, Q)
    assert r.expected == -1 and r.actual == 0
    res = curve_through(triangle(3), conds, Q)
    f = res.poly
    assert f.scale(1 / f.coeffs[(3, 0)]) == parse_poly("x - y", Q) ** 3
    # with (3, 2) the cubics are (x - y)^2 times a line through the origin
    assert dimension_report(3, [((0, 0), 3), ((1, 1), 2)], Q).actual == 1


def test_dimension_examples():
    r = dimension_report(2, [((1, 2), 2)], Q)
    assert r.actual == r.expected == 2
    pts = [(0, 0), (1, 3), (2, -1), (-3, 2), (5, 4)]
    r = dimension_report(4, [(p, 2) for p in pts], Q)
    assert r.expected == -1 and r.actual == 0 and r.excess == 1
    assert squared_conic_check(pts)


def test_actual_at_least_expected():
    rng = random.Random(8)
    for _ in range(20):
        d = rng.randint(1, 5)
        conds = [((rng.randint(-9, 9), rng.randint(-9, 9)), rng.randint(1, 3)) for _ in range(rng.randint(1, 4))]
        r = dimension_report(d, conds, Q)
        assert r.actual >= r.expected


def test_laurent_system_and_invalid_points():
    p = laurent_point(2, -1, LAURENT.base)
    assert p[0] == parse_scalar("t^-2", LAURENT.base)
    sys = multiplicity_system(rectangle(1, 1), [(p, 1)], LAURENT)
    assert solve(sys).kernel_dim == 3
    with pytest.raises(InvalidPoint):
        multiplicity_system([(-1, 0)], [((0, 1), 1)], Q)
    with pytest.raises(InvalidPoint):
        multiplicity_system([(-1, 0)], [((parse_scalar("1 + t", LAURENT.base), 1), 1)], LAURENT)


def test_empty_system():
    rep = eliminate([], Q, ncols=3)
    assert rep.rank == 0 and rep.kernel_dim == 3
    assert matrix_rank([[Q(1), Q(2)], [Q(2), Q(4)]], Q) == 1
    assert eliminate([[Q(0), Q(0)]], Q).rank == 0


def test_eliminate_matches_fraction_rank():
    rng = random.Random(3)
    for _ in range(30):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        k = rng.randint(1, min(r, c))
        a = [[Fraction(rng.randint(-4, 4)) for _ in range(k)] for _ in range(r)]
        b = [[Fraction(rng.randint(-4, 4)) for _ in range(c)] for _ in range(k)]
        m = [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(c)] for i in range(r)]
        rep = eliminate([[Q(x) for x in row] for row in m], Q)
        assert rep.rank <= k
        for v in rep.kernel:
            assert all(sum(row[j] * v[j] for j in range(c)) == 0 for row in m)


def _scalar(text):
    return parse_scalar(text, F5)


def test_detropicalize_examples():
    res = detropicalize([[_scalar("t")]], F5)
    assert int(res.a) == 1 and res.rejected == []
    res = detropicalize([[_scalar("t - 1")]], F5)
    assert int(res.a) == 2 and res.rejected == [1]
    res = detropicalize([[_scalar("t^4 - 1")]], F5)
    assert res.exhausted and res.rejected == [1, 2, 3, 4]
    assert res.to_json()["exhausted"] is True
    with pytest.raises(ValueError):
        detropicalize([[PuiseuxScalar.constant(1, BaseField.rationals())]], BaseField.rationals())


def test_detropicalize_system_preserves_rank():
    p = laurent_point(1, 3, LAURENT.base)
    sys = multiplicity_system(triangle(3), [(p, 2), (laurent_point(-2, 0, LAURENT.base), 2)], LAURENT)
    res = detropicalize_system(sys)
    assert not res.exhausted
    assert res.report.rank == res.laurent_report.rank == 6
