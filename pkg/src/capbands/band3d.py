"""Band geometry on the 2-sphere of radius lambda = sqrt(m).

Counting decisions (band membership, coplanarity, hull volumes) are exact:
integer determinants, Fractions, and quadratic-surd comparisons against
sqrt(m).  Transcendental geometry (arc lengths, sector volumes, spherical
distances) uses mpmath at high precision, since those quantities feed
reports and tolerance checks, never exact counts.

Convention: a unit band is normalized to lie between heights lambda-H-1 and
lambda-H along its axis with 0 <= H <= lambda-1 (bands crossing the equator
are split into two such bands first).  The boundary circle radii are then
R = sqrt(m - (lambda-H-1)^2) and R0 = sqrt(m - (lambda-H)^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath as mp

from .quadratic_counting import embedded_circle_count
from .rational_geometry import QuadSurd, as_fraction_vec, vec_dot, vec_sub
from .regions import is_transverse
from .shell import Point, Shell

mp.mp.dps = 50

IntVec = tuple[int, ...]


# ---------------------------------------------------------------------------
# exact primitives

def tetra_volume(a: IntVec, b: IntVec, c: IntVec, d: IntVec) -> Fraction:
    """|det(a-d, b-d, c-d)| / 6; zero iff the four points are coplanar."""
    u = vec_sub(a, d)
    v = vec_sub(b, d)
    w = vec_sub(c, d)
    det = (u[0] * (v[1] * w[2] - v[2] * w[1])
           - u[1] * (v[0] * w[2] - v[2] * w[0])
           + u[2] * (v[0] * w[1] - v[1] * w[0]))
    return Fraction(abs(det), 6)


def _orient(a, b, c, p) -> int:
    """Sign of det(b-a, c-a, p-a): side of the plane abc that p lies on."""
    u = vec_sub(b, a)
    v = vec_sub(c, a)
    w = vec_sub(p, a)
    det = (u[0] * (v[1] * w[2] - v[2] * w[1])
           - u[1] * (v[0] * w[2] - v[2] * w[0])
           + u[2] * (v[0] * w[1] - v[1] * w[0]))
    return (det > 0) - (det < 0)


def affine_rank(points: Sequence[IntVec]) -> int:
    """Exact affine rank (dimension of the affine span)."""
    pts = list(dict.fromkeys(points))
    if len(pts) <= 1:
        return 0
    base = pts[0]
    d = len(base)
    # reduced row echelon over Q, keyed by pivot column
    pivots: dict[int, list[Fraction]] = {}
    for p in pts[1:]:
        v = [Fraction(x) for x in vec_sub(p, base)]
        for col in sorted(pivots):
            if v[col] != 0:
                row = pivots[col]
                f = v[col] / row[col]
                v = [x - f * y for x, y in zip(v, row)]
        lead = next((i for i, x in enumerate(v) if x != 0), None)
        if lead is not None:
            for row in pivots.values():
                if row[lead] != 0:
                    f = row[lead] / v[lead]
                    row[:] = [x - f * y for x, y in zip(row, v)]
            pivots[lead] = v
        if len(pivots) == d:
            break
    return len(pivots)


def coplanar(points: Sequence[IntVec]) -> bool:
    """True iff all points lie in one affine 2-plane (exact)."""
    return affine_rank(points) <= 2


def hull_volume(points: Sequence[IntVec]) -> Fraction:
    """Exact volume of the convex hull of integer points in R^3.

    Incremental insertion with integer orientation tests.  Points coplanar
    with a face are treated as not visible from it, which can only miss
    zero-volume flat extensions, so the returned volume is still exact; a
    final containment pass asserts nothing non-flat was dropped.
    """
    pts = sorted(dict.fromkeys(tuple(map(int, p)) for p in points))
    if len(pts) < 4 or coplanar(pts):
        return Fraction(0)

    # initial tetra: first point, first distinct, first non-collinear, first non-coplanar
    p0 = pts[0]
    p1 = next(p for p in pts if p != p0)
    p2 = next(p for p in pts if affine_rank([p0, p1, p]) == 2)
    p3 = next(p for p in pts if _orient(p0, p1, p2, p) != 0)
    ref4 = tuple(a + b + c + d for a, b, c, d in zip(p0, p1, p2, p3))

    def outward(face):
        a, b, c = face
        # orient against the interior reference point ref4/4, scaled by 4
        u = vec_sub(tuple(4 * x for x in b), tuple(4 * x for x in a))
        v = vec_sub(tuple(4 * x for x in c), tuple(4 * x for x in a))
        w = vec_sub(ref4, tuple(4 * x for x in a))
        det = (u[0] * (v[1] * w[2] - v[2] * w[1])
               - u[1] * (v[0] * w[2] - v[2] * w[0])
               + u[2] * (v[0] * w[1] - v[1] * w[0]))
        return face if det < 0 else (a, c, b)

    faces = {outward(f) for f in ((p0, p1, p2), (p0, p1, p3), (p0, p2, p3), (p1, p2, p3))}
    for p in pts:
        if p in (p0, p1, p2, p3):
            continue
        visible = {f for f in faces if _orient(*f, p) > 0}
        if not visible:
            continue
        horizon = []
        for f in visible:
            for e in ((f[0], f[1]), (f[1], f[2]), (f[2], f[0])):
                neighbor_visible = False
                for g in visible:
                    if g is not f and e[0] in g and e[1] in g:
                        neighbor_visible = True
                        break
                if not neighbor_visible:
                    horizon.append(e)
        faces -= visible
        for u, v in horizon:
            if affine_rank([u, v, p]) < 2:
                continue  # collinear sliver, zero volume
            faces.add(outward((u, v, p)))

    for p in pts:
        for f in faces:
            if _orient(*f, p) > 0:
                raise AssertionError("hull construction dropped a non-flat point")

    total = 0
    o = pts[0]
    for a, b, c in faces:
        u = vec_sub(a, o)
        v = vec_sub(b, o)
        w = vec_sub(c, o)
        total += (u[0] * (v[1] * w[2] - v[2] * w[1])
                  - u[1] * (v[0] * w[2] - v[2] * w[0])
                  + u[2] * (v[0] * w[1] - v[1] * w[0]))
    return Fraction(abs(total), 6)


# ---------------------------------------------------------------------------
# band profile geometry

def _surd_sum_sign(p: Fraction, q: Fraction, u: Fraction, r: Fraction, v: Fraction) -> int:
    """Exact sign of p + q*sqrt(u) + r*sqrt(v)."""
    a = QuadSurd(p, q, u)
    if r == 0 or v == 0:
        return a.sign()
    sb = 1 if r > 0 else -1
    sa = a.sign()
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    # compare |p + q sqrt(u)|^2 against r^2 v
    diff = QuadSurd(p * p + q * q * u - r * r * v, 2 * p * q, u)
    s = diff.sign()
    return sa if s > 0 else (sb if s < 0 else 0)


@dataclass(frozen=True)
class BandProfile3D:
    """Unit band on the sphere of squared radius m, between heights
    lambda-H-1 and lambda-H along its axis (H rational, 0 <= H <= lambda-1)."""

    m: int
    H: Fraction

    def __post_init__(self):
        object.__setattr__(self, "H", Fraction(self.H))
        if self.H < 0:
            raise ValueError("H must be nonnegative")
        # H <= lambda - 1  <=>  (H+1)^2 <= m
        if (self.H + 1) ** 2 > self.m:
            raise ValueError("H exceeds lambda - 1")

    @property
    def radius_outer_sq(self) -> QuadSurd:
        """R^2 = m - (lambda-H-1)^2 = 2(H+1) lambda - (H+1)^2."""
        h1 = self.H + 1
        return QuadSurd(-h1 * h1, 2 * h1, self.m)

    @property
    def radius_inner_sq(self) -> QuadSurd:
        """R0^2 = m - (lambda-H)^2."""
        return QuadSurd(-self.H * self.H, 2 * self.H, self.m)

    def mp_lambda(self) -> mp.mpf:
        return mp.sqrt(self.m)

    def mp_R(self) -> mp.mpf:
        lam = self.mp_lambda()
        return mp.sqrt(self.m - (lam - mp.mpf(self.H.numerator) / self.H.denominator - 1) ** 2)

    def mp_R0(self) -> mp.mpf:
        lam = self.mp_lambda()
        return mp.sqrt(self.m - (lam - mp.mpf(self.H.numerator) / self.H.denominator) ** 2)


@dataclass(frozen=True)
class Band3D:
    """A band profile attached to a rational axis direction."""

    profile: BandProfile3D
    axis: tuple

    def __post_init__(self):
        ax = as_fraction_vec(self.axis)
        if len(ax) != 3 or all(c == 0 for c in ax):
            raise ValueError("axis must be a nonzero 3-vector")
        object.__setattr__(self, "axis", ax)

    def contains(self, p: Sequence[int]) -> bool:
        """Exact membership: lambda-H-1 <= (p . axis)/|axis| <= lambda-H."""
        ax = self.axis
        n_sq = vec_dot(ax, ax)
        t = vec_dot(as_fraction_vec(p), ax)
        m, H = self.profile.m, self.profile.H
        # t >= (lambda-H-1)|axis|  <=>  t + (H+1) sqrt(n_sq) - sqrt(m n_sq) >= 0
        lower = _surd_sum_sign(t, H + 1, n_sq, Fraction(-1), m * n_sq)
        if lower < 0:
            return False
        # t <= (lambda-H)|axis|  <=>  -t - H sqrt(n_sq) + sqrt(m n_sq) >= 0
        upper = _surd_sum_sign(-t, -H, n_sq, Fraction(1), m * n_sq)
        return upper >= 0

    def members(self, shell: Shell) -> list[Point]:
        if shell.m != self.profile.m:
            raise ValueError("shell and band live on different spheres")
        return [p for p in shell.points if self.contains(p)]


@dataclass(frozen=True)
class BandSector:
    profile: BandProfile3D
    theta: float
    orientation: float = 0.0

    def __post_init__(self):
        if not 0 < self.theta < 1:
            raise ValueError("theta must lie in (0, 1)")

    def length(self) -> mp.mpf:
        return self.profile.mp_R() * mp.mpf(self.theta)


def band_radius_and_width(m: int, H) -> dict:
    """R, R0, spherical width, chord proxy and zone area of the band.

    The spherical width is the exact arc length
    lambda * (acos((lambda-H-1)/lambda) - acos((lambda-H)/lambda)); the chord
    proxy is sqrt(1 + (R-R0)^2).  Zone area is 2 pi lambda per unit height.
    """
    lam = mp.sqrt(m)
    Hmp = _to_mpf(H)
    if Hmp < 0 or Hmp > lam - 1:
        raise ValueError("H out of range [0, lambda-1]")
    R = mp.sqrt(m - (lam - Hmp - 1) ** 2)
    R0 = mp.sqrt(m - (lam - Hmp) ** 2)
    width = lam * (mp.acos((lam - Hmp - 1) / lam) - mp.acos((lam - Hmp) / lam))
    chord = mp.sqrt(1 + (R - R0) ** 2)
    return {"R": R, "R0": R0, "spherical_width": width, "chord_proxy": chord,
            "zone_area": 2 * mp.pi * lam}


def _to_mpf(x) -> mp.mpf:
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(str(x)) if isinstance(x, float) else mp.mpf(x)


def sector_area_profile(m: int, H, theta, h) -> mp.mpf:
    """Cross-section area A(h) of the sector hull at height parameter h."""
    lam = mp.sqrt(m)
    Hmp, th, hh = _to_mpf(H), _to_mpf(theta), _to_mpf(h)
    R = mp.sqrt(m - (lam - Hmp - 1) ** 2)
    R0 = mp.sqrt(m - (lam - Hmp) ** 2)
    return th / 2 * (m - (lam - Hmp - hh) ** 2) - mp.sin(th) / 2 * (R0 + (R - R0) * hh) ** 2


def sector_hull_volume(m: int, H, theta) -> mp.mpf:
    """Closed-form volume of the convex hull of a band sector.

    Integrating the cross-section A(h) = theta/2 (lambda^2 - (lambda-H-h)^2)
    - sin(theta)/2 (R0 + (R-R0) h)^2 over h in [0,1] term by term gives
    theta/2 (2 lambda H - H^2 + lambda - H - 1/3)
    - sin(theta)/6 (R^2 + R R0 + R0^2).
    """
    th = _to_mpf(theta)
    if not 0 < th < 1:
        raise ValueError("theta must lie in (0, 1)")
    lam = mp.sqrt(m)
    Hmp = _to_mpf(H)
    if Hmp < 0 or Hmp > lam - 1:
        raise ValueError("H out of range [0, lambda-1]")
    R2 = m - (lam - Hmp - 1) ** 2
    R02 = m - (lam - Hmp) ** 2
    R, R0 = mp.sqrt(R2), mp.sqrt(R02)
    first = th / 2 * (2 * lam * Hmp - Hmp ** 2 + lam - Hmp - mp.mpf(1) / 3)
    second = mp.sin(th) / 6 * (R2 + R * R0 + R02)
    return first - second


def north_pole_distance(m: int, H, point: Sequence[int], axis=(0, 0, 1)) -> mp.mpf:
    """Great-circle distance from the band's north pole to a point on it.

    The pole is lambda * axis/|axis|; the point must lie on the band
    (checked exactly for integer points and rational H).
    """
    H = Fraction(H)
    band = Band3D(BandProfile3D(m, H), axis)
    pt = tuple(int(c) for c in point)
    if sum(c * c for c in pt) != m:
        raise ValueError("point is not on the sphere")
    if not band.contains(pt):
        raise ValueError("point is not on the band")
    ax = band.axis
    lam = mp.sqrt(m)
    dot = vec_dot(as_fraction_vec(pt), ax)
    norm_sq = vec_dot(ax, ax)
    cosang = _to_mpf(dot) / (mp.sqrt(_to_mpf(norm_sq)) * lam)
    cosang = max(min(cosang, mp.mpf(1)), mp.mpf(-1))
    return lam * mp.acos(cosang)


# ---------------------------------------------------------------------------
# censuses

def _azimuth_frame(axis) -> tuple:
    """Deterministic floats (e1, e2, n) with n along axis, e1, e2 spanning
    the orthogonal plane; used only to bucket members into sectors."""
    import math
    ax = [float(c) for c in axis]
    norm = math.sqrt(sum(c * c for c in ax))
    n = [c / norm for c in ax]
    k = min(range(3), key=lambda i: abs(n[i]))
    e = [0.0, 0.0, 0.0]
    e[k] = 1.0
    # Gram-Schmidt
    proj = sum(e[i] * n[i] for i in range(3))
    e1 = [e[i] - proj * n[i] for i in range(3)]
    norm1 = math.sqrt(sum(c * c for c in e1))
    e1 = [c / norm1 for c in e1]
    e2 = [n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2], n[0] * e1[1] - n[1] * e1[0]]
    return e1, e2, n


def _sector_index(point, frame, n_sectors: int, offset: float) -> int:
    import math
    e1, e2, _ = frame
    x = sum(float(c) * e1[i] for i, c in enumerate(point))
    y = sum(float(c) * e2[i] for i, c in enumerate(point))
    phi = (math.atan2(y, x) - offset) % (2 * math.pi)
    idx = int(phi / (2 * math.pi / n_sectors))
    return min(idx, n_sectors - 1)


@dataclass(frozen=True)
class SectorCensus:
    index: int
    count: int
    hull_vol: Fraction
    points_coplanar: bool


@dataclass(frozen=True)
class CensusA13:
    count: int
    members: tuple[Point, ...]
    regime: int
    R: float
    theta: float | None
    n_sectors: int | None
    sectors: tuple[SectorCensus, ...]
    cap_cover_estimate: int | None


def classify_regime(profile: BandProfile3D) -> int:
    """1 if R <= 2 lambda^(1/2), 3 if R >= lambda^(3/4), else 2, decided
    exactly in Q(sqrt(m)).

    The unit width forces R^2 = (H+1)(2 lambda - H - 1) >= 2 lambda - 1, so
    a coefficient below sqrt(2) would leave the first case empty; 2 is the
    smallest round choice that admits it.
    """
    m = profile.m
    r_sq = profile.radius_outer_sq
    # R^2 <= 4 lambda  <=>  r_sq - 4 sqrt(m) <= 0
    if (r_sq - QuadSurd(0, 4, m)).sign() <= 0:
        return 1
    # R^4 >= lambda^3 = m * sqrt(m)
    r4 = r_sq * r_sq
    if (r4 - QuadSurd(0, m, m)).sign() >= 0:
        return 3
    return 2


def census_A13(shell: Shell, H, axis=(0, 0, 1), theta: float | None = None,
               offset: float = 0.0, sector_details: bool = True) -> CensusA13:
    """Exact lattice count of a unit band, with the case split of the
    one-band analysis: small bands (one cap), middle bands (cap covering
    estimate), large bands (sector decomposition with hull volumes).
    """
    import math
    H = Fraction(H)
    profile = BandProfile3D(shell.m, H)
    band = Band3D(profile, axis)
    members = tuple(band.members(shell))
    regime = classify_regime(profile)
    R = float(profile.mp_R())

    sectors: tuple[SectorCensus, ...] = ()
    n_sectors = None
    theta_used = None
    cap_cover = None
    if regime == 3 or theta is not None:
        theta_used = theta if theta is not None else R ** (-2.0 / 3.0)
        n_sectors = max(1, math.ceil(2 * math.pi / theta_used))
        frame = _azimuth_frame(band.axis)
        buckets: dict[int, list[Point]] = {}
        for p in members:
            buckets.setdefault(_sector_index(p, frame, n_sectors, offset), []).append(p)
        if sector_details:
            recs = []
            for idx in sorted(buckets):
                pts = buckets[idx]
                vol = hull_volume(pts) if len(pts) >= 4 else Fraction(0)
                recs.append(SectorCensus(index=idx, count=len(pts), hull_vol=vol,
                                         points_coplanar=coplanar(pts)))
            sectors = tuple(recs)
    if regime == 2:
        # covering caps of radius lambda^(1/4): count ~ overlap * band area
        # over cap area, with the zone area 2 pi lambda and flat cap area
        # pi lambda^(1/2); overlap factor 2 is the module default
        lam = math.sqrt(shell.m)
        cap_cover = math.ceil(2 * (2 * math.pi * lam) / (math.pi * math.sqrt(lam)))
    return CensusA13(count=len(members), members=members, regime=regime, R=R,
                     theta=theta_used, n_sectors=n_sectors, sectors=sectors,
                     cap_cover_estimate=cap_cover)


@dataclass(frozen=True)
class CensusA23:
    count: int
    members: tuple[Point, ...]
    alpha: float
    pole_distance: float
    covering_sectors: int
    occupied_sectors: int
    theta: float


def census_A23(shell: Shell, band1: Band3D, band2: Band3D,
               theta: float | None = None, offset: float = 0.0) -> CensusA23:
    """Exact lattice count of the intersection of two transverse unit bands.

    Requires nu_{2,3} = 1/2 transversality of the axes.  Reports the angle
    between the axes, the spherical distance between the north poles, and
    the sector covering of the intersection on the larger band.
    """
    import math
    if band1.profile.m != shell.m or band2.profile.m != shell.m:
        raise ValueError("bands and shell live on different spheres")
    if not is_transverse([band1.axis, band2.axis], Fraction(1, 4)):
        raise ValueError("not transverse")
    members = tuple(p for p in shell.points
                    if band1.contains(p) and band2.contains(p))

    a1 = [float(c) for c in band1.axis]
    a2 = [float(c) for c in band2.axis]
    n1 = math.sqrt(sum(c * c for c in a1))
    n2 = math.sqrt(sum(c * c for c in a2))
    cosang = sum(x * y for x, y in zip(a1, a2)) / (n1 * n2)
    alpha = math.acos(max(-1.0, min(1.0, abs(cosang))))
    lam = math.sqrt(shell.m)
    pole_distance = lam * math.acos(max(-1.0, min(1.0, cosang)))

    big = band1 if band1.profile.H >= band2.profile.H else band2
    theta_used = theta if theta is not None else lam ** (-2.0 / 3.0)
    n_sectors = max(1, math.ceil(2 * math.pi / theta_used))
    frame = _azimuth_frame(big.axis)
    occupied = {_sector_index(p, frame, n_sectors, offset) for p in members}
    # geometric covering estimate: the other band's spherical width divided
    # by the sector length R*theta
    other = band2 if big is band1 else band1
    width_other = float(band_radius_and_width(shell.m, other.profile.H)["spherical_width"])
    R_big = float(big.profile.mp_R())
    covering = max(1, math.ceil((width_other + 2) / (R_big * theta_used)))
    return CensusA23(count=len(members), members=members, alpha=alpha,
                     pole_distance=pole_distance, covering_sectors=covering,
                     occupied_sectors=len(occupied), theta=theta_used)


def sector_members_consistency(sector_points: Sequence[Point]) -> bool:
    """Cross-module check: a sector whose hull volume is below 1/6 has
    coplanar lattice points, and their count is then bounded by the
    embedded-circle count through any non-collinear triple of them."""
    pts = list(sector_points)
    if len(pts) < 4:
        return True
    vol = hull_volume(pts)
    if vol >= Fraction(1, 6):
        return True
    if not coplanar(pts):
        return False
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            for k in range(j + 1, len(pts)):
                if affine_rank([pts[i], pts[j], pts[k]]) == 2:
                    trace = embedded_circle_count(pts[i], pts[j], pts[k])
                    return len(pts) <= len(trace.points)
    return True  # all collinear
