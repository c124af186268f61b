import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropinfl.codes import (
    DuplicatePoint,
    Exhausted,
    Infeasible,
    LinearCode,
    TooLarge,
    build_code,
    code_feasibility,
    feasibility,
    jet_matrix,
    min_distance_bruteforce,
)
from tropinfl.lattice import convex_hull, rectangle, triangle
from tropinfl.puiseux import BaseField


def _distance_oracle(code):
    best = code.length
    for msg in product(range(code.p), repeat=code.dimension):
        if any(msg):
            cw = [sum(a * g[j] for a, g in zip(msg, code.generator)) % code.p for j in range(code.length)]
            best = min(best, sum(1 for c in cw if c))
    return best


def test_feasibility_examples():
    f = feasibility(2, 3, 6, 2)
    assert f.ok and f.lhs == 6 and f.rhs == 8 and all(f.hypotheses.values())
    f = feasibility(2, 3, 5, 2)
    assert not f and f.rhs == 6
    assert not feasibility(2, 3, 6, 4).hypotheses["m <= min(N, d)"]
    with pytest.raises(ValueError):
        feasibility(2, 2, 3, 0)


def test_code_feasibility_dispatch():
    assert code_feasibility(rectangle(2, 3), 6, 2).ok
    assert code_feasibility(rectangle(2, 3).translate((4, -1)), 6, 2).ok
    f = code_feasibility(triangle(2), 9, 2)
    assert f.lhs == 2 and f.rhs == uniform_bound_value(9, 2, 2)
    assert not code_feasibility(triangle(2), 9, 3)


def uniform_bound_value(n, m, w):
    return (n - Fraction(w, m) - 1) * m * m / 2


def test_build_code_example():
    code = build_code(rectangle(2, 3), 6, 2)
    assert isinstance(code, LinearCode)
    assert (code.length, code.dimension, code.rank()) == (18, 12, 12)
    prov = code.provenance
    assert prov["feasibility"]["feasible"] and len(prov["points"]) == 6
    assert prov["a"] not in prov["rejected_a"]
    again = LinearCode.from_text(code.to_text())
    assert again.generator == code.generator and again.rank() == code.rank()
    assert LinearCode.from_json(code.to_json()).generator == code.generator


def test_build_code_infeasible():
    res = build_code(rectangle(2, 3), 5, 2)
    assert isinstance(res, Infeasible)
    assert res.to_json()["feasibility"]["feasible"] is False


def test_jet_matrix_and_duplicates():
    base = BaseField.prime(7)
    rows = jet_matrix(triangle(1), [(1, 2), (3, 4)], 1, base)
    values = {(0, 0): lambda x, y: 1, (1, 0): lambda x, y: x, (0, 1): lambda x, y: y}
    cols = triangle(1).lattice_points
    assert [[int(c) for c in r] for r in rows] == [[values[e](*p) for e in cols] for p in [(1, 2), (3, 4)]]
    with pytest.raises(DuplicatePoint):
        jet_matrix(triangle(1), [(1, 2), (8, 9)], 1, base)


def test_generator_validation():
    with pytest.raises(ValueError):
        LinearCode(5, [[1, 2], [2, 4]])
    with pytest.raises(ValueError):
        LinearCode(5, [[1, 2], [1]])
    with pytest.raises(ValueError):
        LinearCode.from_text("1 0\n0 1\n")
    assert LinearCode.from_text("1 0\n0 1\n", p=3).dimension == 2


def test_small_field_exhausts():
    with pytest.raises(Exhausted):
        build_code(rectangle(1, 1), 5, 1, p=5)
    code = build_code(rectangle(1, 1), 5, 1, p=11)
    pts = [tuple(q) for q in code.provenance["field_points"]]
    assert len(set(pts)) == 5


def test_small_distances():
    assert min_distance_bruteforce(LinearCode(3, [[1, 1, 1, 1]])) == 4
    seg = LinearCode(3, [[1, 1, 1], [0, 1, 2]])
    assert min_distance_bruteforce(seg) == _distance_oracle(seg) == 2
    with pytest.raises(TooLarge):
        min_distance_bruteforce(LinearCode(32003, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]), cap=10**6)


@given(st.integers(1, 3), st.integers(1, 4), st.sampled_from([2, 3, 5]), st.integers(0, 2**32))
@settings(max_examples=30, deadline=None)
def test_distance_matches_enumeration(k, extra, p, seed):
    rng = random.Random(seed)
    n = k + extra
    while True:
        g = [[rng.randrange(p) for _ in range(n)] for _ in range(k)]
        try:
            code = LinearCode(p, g)
            break
        except ValueError:
            continue
    assert min_distance_bruteforce(code, chunk=4) == _distance_oracle(code)


def test_large_box_is_infeasible():
    # area 9 exceeds the bound 3 for four double points, so nonexistence is not certified
    big = convex_hull([(0, 0), (3, 0), (0, 3), (3, 3)])
    assert not code_feasibility(big, 4, 2)
    assert isinstance(build_code(big, 4, 2), Infeasible)


def test_feasible_grid_builds():
    rng = random.Random(1)
    cases = [(d, N, n, m) for d in range(1, 5) for N in range(1, 5) for n in range(1, 9) for m in (1, 2)
             if feasibility(d, N, n, m).ok and all(feasibility(d, N, n, m).hypotheses.values())]
    assert cases
    for d, N, n, m in rng.sample(cases, min(6, len(cases))):
        code = build_code(rectangle(d, N), n, m)
        assert code.length == n * m * (m + 1) // 2
        assert code.dimension == (d + 1) * (N + 1)
