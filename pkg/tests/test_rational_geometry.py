import random
from fractions import Fraction

import pytest

from capbands.rational_geometry import (
    QuadSurd,
    circumcenter,
    circumcenter_height_audit,
    circumradius_sq,
    compare_to_sqrt,
    height,
    height_properties_check,
    integer_kernel,
    plane_through,
    solve_affine,
    sqrt_if_perfect_square,
    vec_dot,
    vec_sub,
)


def test_height_examples():
    assert height(Fraction(0)) == 1
    assert height(Fraction(-7, 3)) == 7
    assert height(Fraction(2, 4)) == 2  # reduces to 1/2
    assert height(5) == 5
    assert height(Fraction(1, 9)) == 9


def test_height_properties_examples():
    rep = height_properties_check(Fraction(1, 2), Fraction(1, 3))
    assert rep["H(x+y)"] == 6  # 5/6
    height_properties_check(Fraction(0), Fraction(17, 5))
    height_properties_check(Fraction(3), Fraction(-3))


def test_height_properties_random():
    rng = random.Random(3)
    for _ in range(500):
        x = Fraction(rng.randint(-40, 40), rng.randint(1, 40))
        y = Fraction(rng.randint(-40, 40), rng.randint(1, 40))
        height_properties_check(x, y)


def test_circumcenter_examples():
    assert circumcenter((0, 0), (2, 0), (0, 2)) == (Fraction(1), Fraction(1))
    assert circumcenter((1, 0, 0), (0, 1, 0), (0, 0, 1)) == (
        Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))
    with pytest.raises(ValueError, match="collinear"):
        circumcenter((0, 0), (1, 1), (2, 2))
    with pytest.raises(ValueError, match="duplicate"):
        circumcenter((0, 0), (0, 0), (1, 2))


def _random_noncollinear(rng, d, bound):
    while True:
        pts = [tuple(rng.randint(-bound, bound) for _ in range(d)) for _ in range(3)]
        a = vec_sub(pts[0], pts[1])
        b = vec_sub(pts[0], pts[2])
        if vec_dot(a, a) * vec_dot(b, b) - vec_dot(a, b) ** 2 != 0:
            return pts


def test_circumcenter_equidistant_and_in_span():
    rng = random.Random(5)
    for _ in range(200):
        d = rng.choice([2, 3, 4])
        a1, a2, a3 = _random_noncollinear(rng, d, 15)
        center = circumcenter(a1, a2, a3)
        dists = []
        for p in (a1, a2, a3):
            diff = vec_sub(tuple(Fraction(c) for c in p), center)
            dists.append(vec_dot(diff, diff))
        assert dists[0] == dists[1] == dists[2]
        # the center lies in the affine plane of the triple
        plane = plane_through(a1, a2, a3)
        assert plane.point(center[plane.i1], center[plane.i2]) == center


def test_circumradius_sq():
    assert circumradius_sq((3, 4), (4, 3), (5, 0)) == 25


def test_plane_through_examples():
    p = plane_through((0, 0, 0), (1, 0, 0), (0, 1, 0))
    assert (p.i1, p.i2) == (0, 1)
    assert p.v0 == (Fraction(0),) * 3
    assert p.v1 == (Fraction(1), Fraction(0), Fraction(0))
    assert p.v2 == (Fraction(0), Fraction(1), Fraction(0))

    p = plane_through((0, 0, 1), (1, 0, 1), (0, 1, 1))
    assert (p.i1, p.i2) == (0, 1)
    assert p.v0 == (Fraction(0), Fraction(0), Fraction(1))

    with pytest.raises(ValueError, match="collinear"):
        plane_through((0, 0), (1, 1), (2, 2))


def test_plane_reproduces_inputs_randomly():
    rng = random.Random(9)
    for _ in range(150):
        d = rng.choice([3, 4])
        pts = _random_noncollinear(rng, d, 12)
        plane = plane_through(*pts)
        for p in pts:
            assert plane.point(p[plane.i1], p[plane.i2]) == tuple(Fraction(c) for c in p)


def test_solve_affine():
    part, ker = solve_affine([(1, 0, 0), (0, 1, 0)], [5, 7])
    assert part == (5, 7, 0)
    assert ker == [(0, 0, 1)]
    assert solve_affine([(1, 1), (2, 2)], [1, 2]) is None  # dependent rows


def test_integer_kernel_saturated():
    ker = integer_kernel([(2, 4)])
    assert len(ker) == 1
    v = ker[0]
    assert 2 * v[0] + 4 * v[1] == 0
    assert abs(v[0]) == 2 and abs(v[1]) == 1  # (2,-1), not a multiple

    ker = integer_kernel([(1, 2, 3), (0, 1, 1)])
    assert len(ker) == 1
    v = ker[0]
    assert v[0] + 2 * v[1] + 3 * v[2] == 0
    assert v[1] + v[2] == 0

    rng = random.Random(1)
    for _ in range(100):
        rows = [tuple(rng.randint(-9, 9) for _ in range(4)) for _ in range(2)]
        for v in integer_kernel(rows):
            assert all(sum(r * x for r, x in zip(row, v)) == 0 for row in rows)


def test_quad_surd_signs():
    assert QuadSurd(0, 1, 2) > 1
    assert QuadSurd(0, 1, 2) < Fraction(3, 2)
    assert QuadSurd(-3, 1, 9).sign() == 0  # sqrt(9) collapses
    assert QuadSurd(1, -1, 2).sign() == -1  # 1 - sqrt2 < 0
    assert QuadSurd(2, -1, 2).sign() == 1
    assert compare_to_sqrt(Fraction(7, 5), Fraction(2)) < 0  # 1.4 < sqrt2
    assert compare_to_sqrt(Fraction(3, 2), Fraction(2)) > 0


def test_quad_surd_arithmetic():
    rng = random.Random(2)
    for _ in range(300):
        a, b = Fraction(rng.randint(-9, 9), rng.randint(1, 5)), Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        c, e = Fraction(rng.randint(-9, 9), rng.randint(1, 5)), Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        D = rng.choice([2, 3, 5, 7])
        x = QuadSurd(a, b, D)
        y = QuadSurd(c, e, D)
        for expr, ref in [(x + y, float(x) + float(y)),
                          (x - y, float(x) - float(y)),
                          (x * y, float(x) * float(y))]:
            assert abs(float(expr) - ref) < 1e-9
        assert (x - x).sign() == 0
        assert ((x * y) - (y * x)).sign() == 0


def test_sqrt_if_perfect_square():
    assert sqrt_if_perfect_square(Fraction(9, 4)) == Fraction(3, 2)
    assert sqrt_if_perfect_square(Fraction(2)) is None
    assert sqrt_if_perfect_square(Fraction(-1)) is None
    assert sqrt_if_perfect_square(Fraction(0)) == 0


def test_height_audit_reports_finite_exponent():
    # 10^4 random non-collinear triples spread over the three coordinate bounds
    rng = random.Random(42)
    report = circumcenter_height_audit(rng, samples=3334, max_coords=(10, 100, 1000))
    c = report["fitted_exponent"]
    assert 0 < c < 20
    print(f"\ncircumcenter height growth: fitted exponent c = {c:.3f} "
          f"(records {report['records']})")
