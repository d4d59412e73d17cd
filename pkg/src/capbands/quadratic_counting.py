"""Counting lattice points on a circle embedded in R^d.

The circle through three integer points is intersected with Z^d by reducing
its plane-restricted equation to the positive binary form x^2 + P y^2 = K
(P squarefree) and inverting the substitutions.  The representation count
obeys r_P(K) <= 6 tau(K), which is what makes the count small.

Magnitudes: the integer conic inherits the circumcenter's denominators and
K can reach hundreds of digits for skew triples, so all arithmetic is
arbitrary precision.  However A*B - C^2 = l^2 * Gram(V1, V2) for the
denominator-clearing multiplier l, so its squarefree part only requires
factoring the (small) numerator and denominator of the Gram determinant,
never the inflated integer itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import sympy

from .rational_geometry import (
    PlaneParam,
    as_fraction_vec,
    circumcenter,
    plane_through,
    vec_dot,
    vec_sub,
)
from .shell import Point

# Representation enumeration walks one variable exhaustively; ranges beyond
# this are refused rather than silently running forever.
MAX_ENUM_RANGE = 10 ** 8


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n = P * Q^2 with P squarefree, P, Q >= 1."""
    if n <= 0:
        raise ValueError("n must be positive")
    P = 1
    Q = 1
    for prime, exp in sympy.factorint(n).items():
        if exp % 2:
            P *= prime
        Q *= prime ** (exp // 2)
    return P, Q


def divisor_count(k: int) -> int:
    """tau(|k|), the number of positive divisors."""
    if k == 0:
        raise ValueError("divisor count undefined for 0")
    return int(sympy.divisor_count(abs(k)))


def represent_norm_form(P: int, K: int) -> list[tuple[int, int]]:
    """All integer solutions of x^2 + P y^2 = K, exhaustively over y.

    P must be positive and squarefree.  For K != 0 the solution count is
    asserted against the divisor bound r_P(K) <= 6 tau(K).
    """
    if P <= 0:
        raise ValueError("P must be positive")
    Psf, _ = squarefree_decompose(P)
    if Psf != P:
        raise ValueError(f"P={P} is not squarefree")
    if K < 0:
        return []
    y_max = isqrt(K // P)
    if y_max > MAX_ENUM_RANGE:
        raise OverflowError(f"norm-form range {y_max} exceeds configured limit")
    solutions = []
    for y in range(-y_max, y_max + 1):
        rest = K - P * y * y
        x = isqrt(rest)
        if x * x == rest:
            solutions.append((x, y))
            if x != 0:
                solutions.append((-x, y))
    solutions.sort()
    if K != 0:
        assert len(solutions) <= 6 * divisor_count(K), (P, K, len(solutions))
    return solutions


# ---------------------------------------------------------------------------
# circle pipeline

@dataclass(frozen=True)
class ConicForm:
    """Integer conic A x1^2 + B x2^2 + 2C x1 x2 + 2D x1 + 2E x2 + F = 0 with
    positive definite leading form (AB - C^2 > 0)."""

    A: int
    B: int
    C: int
    D: int
    E: int
    F: int

    def __post_init__(self):
        if self.A * self.B - self.C * self.C <= 0:
            raise ValueError("leading form must be positive definite")

    def evaluate(self, x1: int, x2: int) -> int:
        return (self.A * x1 * x1 + self.B * x2 * x2 + 2 * self.C * x1 * x2
                + 2 * self.D * x1 + 2 * self.E * x2 + self.F)


@dataclass(frozen=True)
class NormFormInstance:
    """The completed-square data: with G = AB - C^2 = P Q^2,
    x = G x2 + (AE - CD), y = Q (A x1 + C x2 + D) satisfy x^2 + P y^2 = K."""

    P: int
    Q: int
    K: int
    conic: ConicForm

    @property
    def G(self) -> int:
        c = self.conic
        return c.A * c.B - c.C * c.C

    def substitute(self, x1: int, x2: int) -> tuple[int, int]:
        c = self.conic
        x = self.G * x2 + (c.A * c.E - c.C * c.D)
        y = self.Q * (c.A * x1 + c.C * x2 + c.D)
        return x, y


@dataclass(frozen=True)
class CircleCountTrace:
    """Full audit trail of the embedded-circle count."""

    center: tuple
    radius_sq: Fraction
    plane: PlaneParam
    conic: ConicForm
    norm_form: NormFormInstance
    solutions: tuple[tuple[int, int], ...]
    points: tuple[Point, ...]


def _conic_from_circle(plane: PlaneParam, center, radius_sq: Fraction) -> tuple[ConicForm, Fraction]:
    """Integer conic for |V0 + x1 V1 + x2 V2 - X0|^2 = R^2, cleared and
    content-reduced; also returns Gram(V1, V2) for the squarefree shortcut."""
    w = vec_sub(plane.v0, center)
    a = vec_dot(plane.v1, plane.v1)
    b = vec_dot(plane.v2, plane.v2)
    c = vec_dot(plane.v1, plane.v2)
    dd = vec_dot(plane.v1, w)
    ee = vec_dot(plane.v2, w)
    ff = vec_dot(w, w) - radius_sq
    scale = 1
    for coeff in (a, b, c, dd, ee, ff):
        q = coeff.denominator
        scale = scale * q // gcd(scale, q)
    ints = [int(coeff * scale) for coeff in (a, b, c, dd, ee, ff)]
    content = 0
    for v in ints:
        content = gcd(content, v)
    ints = [v // content for v in ints]
    return ConicForm(*ints), a * b - c * c


def _squarefree_part_of_fraction_square_times(g: Fraction, target: int) -> tuple[int, int]:
    """Decompose target = P Q^2 given target = (integer)^2 * g for a rational
    g with modest numerator and denominator; only g is ever factored."""
    P = 1
    for prime, exp in sympy.factorint(g.numerator * g.denominator).items():
        if exp % 2:
            P *= prime
    quo, rem = divmod(target, P)
    Q = isqrt(quo)
    if rem != 0 or Q * Q != quo:
        # fallback: factor the target directly
        P, Q = squarefree_decompose(target)
    return P, Q


def build_norm_form(a1: Point, a2: Point, a3: Point) -> tuple[CircleCountTrace, Fraction]:
    """Run the reduction pipeline up to the norm form, without enumerating."""
    center = circumcenter(a1, a2, a3)
    diff = vec_sub(as_fraction_vec(a1), center)
    radius_sq = vec_dot(diff, diff)
    plane = plane_through(a1, a2, a3)
    conic, gram = _conic_from_circle(plane, center, radius_sq)
    for pt in (a1, a2, a3):
        if conic.evaluate(pt[plane.i1], pt[plane.i2]) != 0:
            raise AssertionError("conic does not pass through an input point")
    G = conic.A * conic.B - conic.C * conic.C
    P, Q = _squarefree_part_of_fraction_square_times(gram, G)
    assert P * Q * Q == G
    A, B, C, D, E, F = conic.A, conic.B, conic.C, conic.D, conic.E, conic.F
    K = (A * E - C * D) ** 2 - (A * F - D * D) * G
    nf = NormFormInstance(P=P, Q=Q, K=K, conic=conic)
    trace = CircleCountTrace(center=center, radius_sq=radius_sq, plane=plane,
                             conic=conic, norm_form=nf, solutions=(), points=())
    return trace, radius_sq


def _floor_fraction(x: Fraction) -> int:
    return x.numerator // x.denominator


def embedded_circle_count(a1: Point, a2: Point, a3: Point) -> CircleCountTrace:
    """Exact count of Z^d on the circle through three integer points.

    Enumerates norm-form solutions along the congruence-constrained variable
    x = G x2 + (AE - CD): the coordinate x2 of any circle point differs from
    the center coordinate by at most the circumradius, so the walk has at
    most 2R + 3 steps regardless of how large the cleared coefficients are.
    Each candidate is inverted through the substitutions with exact
    divisibility filtering, and accepted only if the reconstructed point is
    integral and satisfies the circle equation exactly.
    """
    trace, radius_sq = build_norm_form(a1, a2, a3)
    plane, conic, nf = trace.plane, trace.conic, trace.norm_form
    center = trace.center
    A, C, D = conic.A, conic.C, conic.D
    G, P, Q, K = nf.G, nf.P, nf.Q, nf.K
    ae_cd = A * conic.E - C * D

    rad = isqrt(_floor_fraction(radius_sq)) + 1
    if 2 * rad + 3 > MAX_ENUM_RANGE:
        raise OverflowError("circle radius exceeds configured enumeration limit")
    mid = _floor_fraction(center[plane.i2])
    points = set()
    solutions = set()
    for x2 in range(mid - rad - 1, mid + rad + 2):
        x = G * x2 + ae_cd
        rest = K - x * x
        if rest < 0 or rest % P:
            continue
        y_sq = rest // P
        y = isqrt(y_sq)
        if y * y != y_sq:
            continue
        for yy in {y, -y}:
            # invert y = Q (A x1 + C x2 + D); both steps must divide exactly
            if yy % Q:
                continue
            z = yy // Q - C * x2 - D
            if z % A:
                continue
            x1 = z // A
            solutions.add((x, yy))
            pt = plane.point(x1, x2)
            if all(coord.denominator == 1 for coord in pt):
                ipt = tuple(int(coord) for coord in pt)
                residual = vec_sub(as_fraction_vec(ipt), center)
                if vec_dot(residual, residual) == radius_sq:
                    points.add(ipt)
    return CircleCountTrace(center=center, radius_sq=radius_sq, plane=plane,
                            conic=conic, norm_form=nf,
                            solutions=tuple(sorted(solutions)),
                            points=tuple(sorted(points)))


def embedded_circle_count_bruteforce(a1: Point, a2: Point, a3: Point) -> tuple[Point, ...]:
    """Independent oracle: scan the circle's bounding box along one plane
    coordinate and solve the remaining quadratic exactly per column."""
    center = circumcenter(a1, a2, a3)
    diff = vec_sub(as_fraction_vec(a1), center)
    radius_sq = vec_dot(diff, diff)
    plane = plane_through(a1, a2, a3)
    rad = isqrt(_floor_fraction(radius_sq)) + 1
    mid = _floor_fraction(center[plane.i1])
    quad_a = vec_dot(plane.v2, plane.v2)
    out = set()
    for x1 in range(mid - rad - 1, mid + rad + 2):
        u = tuple(v0 + x1 * v1 - c for v0, v1, c in zip(plane.v0, plane.v1, center))
        quad_b = 2 * vec_dot(u, plane.v2)
        quad_c = vec_dot(u, u) - radius_sq
        disc = quad_b * quad_b - 4 * quad_a * quad_c
        if disc < 0:
            continue
        num, den = disc.numerator, disc.denominator
        sn, sd = isqrt(num), isqrt(den)
        if sn * sn != num or sd * sd != den:
            continue
        root = Fraction(sn, sd)
        for sign in (1, -1):
            x2 = (-quad_b + sign * root) / (2 * quad_a)
            if x2.denominator != 1:
                continue
            pt = plane.point(x1, int(x2))
            if all(coord.denominator == 1 for coord in pt):
                ipt = tuple(int(coord) for coord in pt)
                residual = vec_sub(as_fraction_vec(ipt), center)
                if vec_dot(residual, residual) == radius_sq:
                    out.add(ipt)
    return tuple(sorted(out))


def k_growth_report(rng, trials: int, coord_bound: int, d: int) -> dict:
    """Observed |K| against circumradius R over random triples, with the
    fitted exponent in |K| <= R^c reported (never asserted)."""
    import math

    xs, ys = [], []
    produced = 0
    while produced < trials:
        pts = [tuple(rng.randint(-coord_bound, coord_bound) for _ in range(d))
               for _ in range(3)]
        try:
            trace, radius_sq = build_norm_form(*pts)
        except ValueError:
            continue
        produced += 1
        r = math.sqrt(float(radius_sq))
        if r > 1 and abs(trace.norm_form.K) > 1:
            xs.append(math.log(r))
            ys.append(math.log(abs(trace.norm_form.K)))
    c = sum(x * y for x, y in zip(xs, ys)) / sum(x * x for x in xs)
    return {"samples": len(xs), "fitted_exponent": c}
