"""Exact rational geometry: heights, quadratic surds, circumcenters, plane frames.

Everything in this module is exact.  Points are tuples of ints (lattice
points) or Fractions (rational points); no floats enter any predicate.
Quantities that live in a real quadratic extension Q(sqrt(D)) are handled
by :class:`QuadSurd`, which supports exact sign determination, so geometric
comparisons against irrational thresholds (like sqrt(m)) never fall back to
floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

Rational = Fraction
RatVec = tuple[Fraction, ...]
IntVec = tuple[int, ...]


# ---------------------------------------------------------------------------
# heights

def height(x: Fraction | int) -> int:
    """Height of a rational: max(|p|, |q|) in lowest terms, with height(0) = 1."""
    x = Fraction(x)
    return max(abs(x.numerator), x.denominator, 1)


def height_properties_check(x: Fraction | int, y: Fraction | int) -> dict:
    """Check the elementary height inequalities for a pair of rationals.

    Returns a report dict; raises AssertionError if any property fails.
    Checked: H(-x) = H(x); H(1/x) = H(x) for x != 0; H(x+y) <= 2 H(x) H(y);
    H(xy) <= H(x) H(y).
    """
    x, y = Fraction(x), Fraction(y)
    hx, hy = height(x), height(y)
    report = {
        "H(x)": hx,
        "H(y)": hy,
        "H(-x)": height(-x),
        "H(x+y)": height(x + y),
        "H(xy)": height(x * y),
    }
    assert report["H(-x)"] == hx
    if x != 0:
        report["H(1/x)"] = height(1 / x)
        assert report["H(1/x)"] == hx
    assert report["H(x+y)"] <= 2 * hx * hy
    assert report["H(xy)"] <= hx * hy
    return report


# ---------------------------------------------------------------------------
# exact vector helpers (shared by the counting modules)

def vec_add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vec_sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vec_dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b, strict=True))


def vec_scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def as_fraction_vec(v: Sequence) -> RatVec:
    return tuple(Fraction(x) for x in v)


def gram_matrix(vectors: Sequence[Sequence]) -> list[list[Fraction]]:
    vs = [as_fraction_vec(v) for v in vectors]
    return [[vec_dot(u, w) for w in vs] for u in vs]


def det_exact(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction-free style Gaussian elimination, exact."""
    n = len(matrix)
    m = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def solve_affine(rows: Sequence[Sequence], rhs: Sequence) -> tuple[RatVec, list[RatVec]] | None:
    """Solve rows * c = rhs exactly over Q.

    Returns (particular solution, kernel basis) or None if the system is
    inconsistent or the rows are dependent (rank < number of rows).
    """
    k = len(rows)
    if k == 0:
        raise ValueError("empty system")
    d = len(rows[0])
    m = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    pivots: list[int] = []
    r = 0
    for col in range(d):
        p = next((i for i in range(r, k) if m[i][col] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(k):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == k:
            break
    if r < k:
        return None
    particular = [Fraction(0)] * d
    for i, col in enumerate(pivots):
        particular[col] = m[i][d]
    kernel = []
    for free in (c for c in range(d) if c not in pivots):
        v = [Fraction(0)] * d
        v[free] = Fraction(1)
        for i, col in enumerate(pivots):
            v[col] = -m[i][free]
        kernel.append(tuple(v))
    return tuple(particular), kernel


def integer_kernel(rows: Sequence[Sequence[int]]) -> list[IntVec]:
    """Z-basis of {x in Z^d : rows @ x = 0}, via unimodular column reduction.

    The returned basis is saturated (it generates the full integer kernel,
    not a finite-index sublattice).
    """
    k = len(rows)
    d = len(rows[0]) if k else 0
    work = [list(map(int, row)) for row in rows]
    trans = [[1 if i == j else 0 for j in range(d)] for i in range(d)]  # columns of identity

    def col(j):
        return [work[i][j] for i in range(k)]

    row = 0
    for i in range(k):
        while True:
            nonzero = [j for j in range(row, d) if work[i][j] != 0]
            if not nonzero:
                break
            j0 = min(nonzero, key=lambda j: abs(work[i][j]))
            if j0 != row:
                for r in range(k):
                    work[r][row], work[r][j0] = work[r][j0], work[r][row]
                trans[row], trans[j0] = trans[j0], trans[row]
            if all(work[i][j] == 0 for j in range(row + 1, d)):
                break
            for j in range(row + 1, d):
                if work[i][j] != 0:
                    q = work[i][j] // work[i][row]
                    for r in range(k):
                        work[r][j] -= q * work[r][row]
                    trans[j] = [a - q * b for a, b in zip(trans[j], trans[row])]
        if any(work[i][j] != 0 for j in range(row, d)):
            row += 1
    return [tuple(trans[j]) for j in range(row, d)]


# ---------------------------------------------------------------------------
# quadratic surds

def sqrt_if_perfect_square(x: Fraction) -> Fraction | None:
    """Exact rational square root of x, or None if x is not a perfect square."""
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    sn, sd = isqrt(n), isqrt(d)
    if sn * sn == n and sd * sd == d:
        return Fraction(sn, sd)
    return None


class QuadSurd:
    """Exact number a + b*sqrt(D) with rational a, b and rational D >= 0.

    Supports ring operations within a fixed Q(sqrt(D)) and exact sign
    determination, which is all the membership predicates need.
    """

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b=0, D=0):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.D = Fraction(D)
        if self.D < 0:
            raise ValueError("negative radicand")
        if self.b == 0 or self.D == 0:
            self.b = Fraction(0)
            self.D = Fraction(0)
        else:
            root = sqrt_if_perfect_square(self.D)
            if root is not None:
                self.a += self.b * root
                self.b = Fraction(0)
                self.D = Fraction(0)

    def _coerce(self, other) -> "QuadSurd":
        if isinstance(other, QuadSurd):
            if self.D != other.D and self.b != 0 and other.b != 0:
                raise ValueError("mixed radicands")
            return other
        return QuadSurd(other)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadSurd(self.a + o.a, self.b + o.b, max(self.D, o.D))

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.D)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        D = max(self.D, o.D)
        return QuadSurd(self.a * o.a + self.b * o.b * D, self.a * o.b + self.b * o.a, D)

    __rmul__ = __mul__

    def sign(self) -> int:
        a, b, D = self.a, self.b, self.D
        if b == 0 or D == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        sa = 1 if a > 0 else -1
        sb = 1 if b > 0 else -1
        if sa == sb:
            return sa
        lhs, rhs = a * a, b * b * D
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def __eq__(self, other):
        try:
            return (self - other).sign() == 0
        except (ValueError, TypeError):
            return NotImplemented

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __hash__(self):
        return hash((self.a, self.b, self.D))

    def __float__(self):
        return float(self.a) + float(self.b) * float(self.D) ** 0.5

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        return f"{self.a}+{self.b}*sqrt({self.D})"


def compare_to_sqrt(value: Fraction, radicand: Fraction) -> int:
    """Sign of value - sqrt(radicand), exactly (radicand >= 0)."""
    return QuadSurd(value, Fraction(-1), radicand).sign()


# ---------------------------------------------------------------------------
# circumcenter and plane of three lattice points

def _check_triple(a1: IntVec, a2: IntVec, a3: IntVec) -> tuple[IntVec, IntVec]:
    if len({a1, a2, a3}) < 3:
        raise ValueError("duplicate points")
    a = vec_sub(a1, a2)
    b = vec_sub(a1, a3)
    if vec_dot(a, a) * vec_dot(b, b) - vec_dot(a, b) ** 2 == 0:
        raise ValueError("collinear")
    return a, b


def circumcenter(a1: IntVec, a2: IntVec, a3: IntVec) -> RatVec:
    """Center of the circle through three non-collinear integer points.

    The center is the intersection of the two perpendicular bisectors of
    A1A2 and A1A3 inside the affine plane of the triple; solving the 2x2
    system in the (a, b) basis gives it after finitely many exact steps.
    """
    a, b = _check_triple(a1, a2, a3)
    aa, bb, ab = vec_dot(a, a), vec_dot(b, b), vec_dot(a, b)
    mu = Fraction(ab, aa)
    nu = Fraction(ab, bb)
    # X(t) = (A1+A2)/2 + t*(b - mu*a) meets X(s) = (A1+A3)/2 + s*(a - nu*b);
    # expanding both sides in the (a, b) basis leaves a 2x2 system whose
    # determinant 1 - mu*nu > 0 by Cauchy-Schwarz.
    t = (nu - 1) / (2 * (1 - mu * nu))
    w1 = tuple(Fraction(bi) - mu * ai for ai, bi in zip(a, b))
    return tuple(Fraction(p + q, 2) + t * w for p, q, w in zip(a1, a2, w1))


def circumradius_sq(a1: IntVec, a2: IntVec, a3: IntVec) -> Fraction:
    x0 = circumcenter(a1, a2, a3)
    diff = vec_sub(as_fraction_vec(a1), x0)
    return vec_dot(diff, diff)


class PlaneParam:
    """Rational parameterization X = V0 + x[i1]*V1 + x[i2]*V2 of a 2-plane.

    i1, i2 are 0-based coordinate indices; every point X of the plane is
    recovered from its own i1-th and i2-th coordinates.
    """

    __slots__ = ("i1", "i2", "v0", "v1", "v2")

    def __init__(self, i1: int, i2: int, v0: RatVec, v1: RatVec, v2: RatVec):
        self.i1, self.i2 = i1, i2
        self.v0, self.v1, self.v2 = v0, v1, v2

    def point(self, x1, x2) -> RatVec:
        return tuple(v0 + x1 * v1 + x2 * v2 for v0, v1, v2 in zip(self.v0, self.v1, self.v2))

    def __repr__(self):
        return f"PlaneParam(i1={self.i1}, i2={self.i2}, v0={self.v0})"


def plane_through(a1: IntVec, a2: IntVec, a3: IntVec) -> PlaneParam:
    """Parameterize the 2-plane through three non-collinear integer points.

    Starting from X(t, s) = A1 + t*a + s*b, pick two linearly independent
    rows (i1, i2) of the d x 2 matrix [a b] and eliminate (t, s) in favor of
    the coordinates (x_i1, x_i2).  Among independent row pairs the one with
    the smallest |det| is chosen, which keeps denominators small.
    """
    a, b = _check_triple(a1, a2, a3)
    d = len(a1)
    best = None
    for i in range(d):
        for j in range(i + 1, d):
            det = a[i] * b[j] - a[j] * b[i]
            if det != 0 and (best is None or abs(det) < abs(best[0])):
                best = (det, i, j)
    if best is None:
        raise ValueError("collinear")
    det, i1, i2 = best
    v1 = tuple(Fraction(ai * b[i2] - bi * a[i2], det) for ai, bi in zip(a, b))
    v2 = tuple(Fraction(bi * a[i1] - ai * b[i1], det) for ai, bi in zip(a, b))
    v0 = tuple(Fraction(p) - v1[k] * a1[i1] - v2[k] * a1[i2] for k, p in enumerate(a1))
    plane = PlaneParam(i1, i2, v0, v1, v2)
    for pt in (a1, a2, a3):
        if plane.point(pt[i1], pt[i2]) != as_fraction_vec(pt):
            raise AssertionError("plane parameterization failed to reproduce input")
    return plane


def circumcenter_height_audit(rng, samples: int, max_coords: Iterable[int] = (10, 100, 1000)) -> dict:
    """Record circumcenter component heights over random triples and fit the
    growth exponent c in H <= R^c.

    The exponent is reported, never asserted against a specific value.
    """
    import math

    records = []
    for r_bound in max_coords:
        worst = 1
        produced = 0
        while produced < samples:
            pts = [tuple(rng.randint(-r_bound, r_bound) for _ in range(3)) for _ in range(3)]
            try:
                center = circumcenter(*pts)
            except ValueError:
                continue
            produced += 1
            worst = max(worst, max(height(c) for c in center))
        records.append((r_bound, worst))
    # least squares fit of log H = c log R through the recorded maxima
    xs = [math.log(r) for r, _ in records]
    ys = [math.log(h) for _, h in records]
    c = sum(x * y for x, y in zip(xs, ys)) / sum(x * x for x in xs)
    return {"records": records, "fitted_exponent": c}
