"""Exact membership, counting and extremal search for caps and bands.

Caps here are Euclidean balls intersected with the shell's sphere; unit
bands are slabs between parallel hyperplanes.  All membership predicates
are decided in exact rational arithmetic (or in Q(sqrt(D)) via QuadSurd
when a candidate center involves a square root), so counts are exact and
deterministic.  The extremal searches return certified witnesses: every
reported count can be re-verified by exact membership of the witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import isqrt
from typing import Iterable, Literal, Sequence

from .rational_geometry import (
    QuadSurd,
    as_fraction_vec,
    det_exact,
    gram_matrix,
    solve_affine,
    sqrt_if_perfect_square,
    vec_dot,
    vec_sub,
)
from .shell import Point, Shell

Vec = Sequence


# ---------------------------------------------------------------------------
# region types

@dataclass(frozen=True)
class Cap:
    """Ball membership |x - center|^2 <= radius_sq, decided exactly.

    Center components may be Fraction or QuadSurd (sharing one radicand);
    the latter occur as witnesses of the exact cap maximization.
    """

    center: tuple
    radius_sq: Fraction

    def __post_init__(self):
        if self.radius_sq <= 0:
            raise ValueError("radius_sq must be positive")

    def contains(self, x: Vec) -> bool:
        total = None
        for xi, ci in zip(x, self.center, strict=True):
            diff = (Fraction(xi) - ci) if isinstance(ci, Fraction) else (QuadSurd(xi) - ci)
            sq = diff * diff
            total = sq if total is None else total + sq
        if isinstance(total, QuadSurd):
            return (total - self.radius_sq).sign() <= 0
        return total <= self.radius_sq


@dataclass(frozen=True)
class UnitBand:
    """Slab |u/(|u|) . (x - anchor)| <= half_width, decided exactly.

    The defining inequality is squared so that only rational data appears:
    (u . (x - anchor))^2 <= half_width^2 * |u|^2.
    """

    direction: tuple
    anchor: tuple
    half_width: Fraction = Fraction(1, 2)

    def __post_init__(self):
        u = as_fraction_vec(self.direction)
        if all(c == 0 for c in u):
            raise ValueError("zero direction vector")
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        object.__setattr__(self, "direction", u)
        object.__setattr__(self, "anchor", as_fraction_vec(self.anchor))

    def contains(self, x: Vec) -> bool:
        u = self.direction
        t = vec_dot(u, vec_sub(as_fraction_vec(x), self.anchor))
        return t * t <= self.half_width ** 2 * vec_dot(u, u)


def default_nu_sq(k: int, d: int) -> Fraction:
    """nu_{k,d}^2 = (d-k+1)^(-k), the transversality threshold squared."""
    if not 1 <= k <= d - 1:
        raise ValueError(f"need 1 <= k <= d-1, got k={k}, d={d}")
    return Fraction(1, (d - k + 1) ** k)


def wedge_norm_sq(vectors: Sequence[Vec]) -> Fraction:
    """|u_1 ^ ... ^ u_k|^2 = det of the Gram matrix [u_i . u_j], exact."""
    return det_exact(gram_matrix(vectors))


def is_transverse(vectors: Sequence[Vec], nu_sq: Fraction | None = None) -> bool:
    """Whether the family satisfies |u_1^...^u_k| >= nu * |u_1|...|u_k|."""
    k = len(vectors)
    d = len(vectors[0])
    if nu_sq is None:
        nu_sq = default_nu_sq(k, d)
    prod = Fraction(1)
    for v in vectors:
        fv = as_fraction_vec(v)
        prod *= vec_dot(fv, fv)
    return wedge_norm_sq(vectors) >= nu_sq * prod


@dataclass(frozen=True)
class BandFamily:
    """k unit bands over one dimension, validated nu_{k,d}-transverse."""

    bands: tuple[UnitBand, ...]
    nu_sq: Fraction = field(default=None)  # filled in post-init when omitted

    def __post_init__(self):
        k = len(self.bands)
        d = len(self.bands[0].direction)
        if not 1 <= k <= d - 1:
            raise ValueError(f"need 1 <= k <= d-1 bands, got k={k}, d={d}")
        nu_sq = self.nu_sq if self.nu_sq is not None else default_nu_sq(k, d)
        object.__setattr__(self, "nu_sq", nu_sq)
        dirs = [b.direction for b in self.bands]
        if not is_transverse(dirs, nu_sq):
            raise ValueError("band directions are not transverse at the required threshold")

    @property
    def k(self) -> int:
        return len(self.bands)

    def contains(self, x: Vec) -> bool:
        return all(b.contains(x) for b in self.bands)


@dataclass(frozen=True)
class DyadicBand:
    """One dyadic level around an anchor point: |(m - n) . u| in the level-p
    annulus scaled by c0 |u| (level 0 is the solid slab)."""

    direction: tuple
    anchor: Point
    level: int
    c0: Fraction = Fraction(1)

    def contains(self, n: Vec) -> bool:
        u = as_fraction_vec(self.direction)
        t = vec_dot(u, vec_sub(as_fraction_vec(self.anchor), as_fraction_vec(n)))
        bound = self.c0 ** 2 * vec_dot(u, u)
        if self.level == 0:
            return t * t <= bound
        return bound * 4 ** (self.level - 1) < t * t <= bound * 4 ** self.level


# ---------------------------------------------------------------------------
# counting

def cap_count(shell: Shell, cap: Cap) -> tuple[int, list[Point]]:
    """Exact count and members of the shell inside the cap."""
    if len(cap.center) != shell.d:
        raise ValueError("dimension mismatch between shell and cap")
    members = [p for p in shell.points if cap.contains(p)]
    return len(members), members


def band_count(shell: Shell, band: UnitBand) -> tuple[int, list[Point]]:
    """Exact count and members of the shell inside the band."""
    if len(band.direction) != shell.d:
        raise ValueError("dimension mismatch between shell and band")
    members = [p for p in shell.points if band.contains(p)]
    return len(members), members


def band_family_count(shell: Shell, family: BandFamily) -> tuple[int, list[Point]]:
    members = [p for p in shell.points if family.contains(p)]
    return len(members), members


# ---------------------------------------------------------------------------
# dyadic decomposition

def dyadic_level(u: Vec, anchor: Vec, n: Vec, c0: Fraction = Fraction(1)) -> int:
    """Dyadic level p of n relative to the anchor along u (level 0 is the
    unit slab, level p>0 the annulus (2^(p-1), 2^p] in units of c0|u|)."""
    uf = as_fraction_vec(u)
    t = vec_dot(uf, vec_sub(as_fraction_vec(anchor), as_fraction_vec(n)))
    ratio = t * t / (c0 ** 2 * vec_dot(uf, uf))
    if ratio <= 1:
        return 0
    p = 1
    while ratio > 4 ** p:
        p += 1
    return p


def dyadic_decompose(shell: Shell, u: Vec, anchor: Point,
                     c0: Fraction = Fraction(1)) -> dict[int, list[Point]]:
    """Partition the shell into dyadic levels around the anchor point.

    Every point lands in exactly one level; the anchor itself is at level 0.
    """
    if anchor not in set(shell.points):
        raise ValueError("anchor must be a shell point")
    levels: dict[int, list[Point]] = {}
    for n in shell.points:
        levels.setdefault(dyadic_level(u, anchor, n, c0), []).append(n)
    return levels


def dyadic_level_bands(u: Vec, members: Sequence[Point], level: int,
                       c0: Fraction = Fraction(1)) -> list[UnitBand]:
    """Greedy cover of one dyadic level's points by unit bands of width c0.

    Bands are anchored at member points (rational anchors), each covering a
    window of normalized width c0 centered there; a level-p annulus side has
    normalized length c0 2^(p-1), so the greedy cover uses at most
    2^(p+1) + 2 bands (module constant C = 4 in "<= C 2^p").
    """
    uf = as_fraction_vec(u)
    norm_sq = vec_dot(uf, uf)
    half_sq = Fraction(c0, 2) ** 2 * norm_sq
    remaining = sorted(members, key=lambda p: vec_dot(uf, as_fraction_vec(p)))
    bands: list[UnitBand] = []
    while remaining:
        anchor = remaining[0]
        band = UnitBand(direction=uf, anchor=anchor, half_width=Fraction(c0, 2))
        t0 = vec_dot(uf, as_fraction_vec(anchor))
        kept = []
        for p in remaining:
            diff = vec_dot(uf, as_fraction_vec(p)) - t0
            if diff * diff <= half_sq:
                continue
            kept.append(p)
        bands.append(band)
        remaining = kept
    assert len(bands) <= 2 ** (level + 1) + 2
    return bands


def dyadic_sum_report(shell: Shell, u: Vec, anchor: Point,
                      c0: Fraction = Fraction(1)) -> dict:
    """Per-level counts and the 2^(-p)-weighted sum of the dyadic split.

    The weighted sum is the quantity whose growth in lambda the dyadic
    argument controls; it is reported, never asserted asymptotically.
    """
    levels = dyadic_decompose(shell, u, anchor, c0)
    counts = {p: len(v) for p, v in sorted(levels.items())}
    weighted = sum(c * 0.5 ** p for p, c in counts.items())
    return {"counts": counts, "weighted_sum": weighted, "max_level": max(counts)}


# ---------------------------------------------------------------------------
# exact cap maximization
#
# A cap of squared radius r2 with center c on the sphere |c|^2 = m contains
# the shell point n iff n.c >= m - r2/2, so maximizing the cap count is a
# deepest-cell problem for half-spaces indexed by unit directions.  The
# maximum is attained either at a cap centered on a shell point direction or
# at a center where d-1 member constraints are active; those centers solve a
# linear system plus the sphere equation and live in Q(sqrt(D)).

CapSearchMode = Literal["exact", "points", "grid"]


@dataclass(frozen=True)
class CapSearchResult:
    count: int
    witness: Cap | None
    members: tuple[Point, ...]


def default_cap_radius_sq(m: int) -> Fraction:
    """Canonical squared radius of the lambda^(1/2)-cap: floor(lambda).

    The exact value lambda = sqrt(m) is irrational for non-square m; the
    floor is the canonical rational stand-in and is configurable wherever a
    radius appears.
    """
    return Fraction(isqrt(m))


def _int_surd_sign(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d) for integers, d >= 0."""
    if b == 0 or d == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    sa = 1 if a > 0 else -1
    sb = 1 if b > 0 else -1
    if sa == sb:
        return sa
    lhs, rhs = a * a, b * b * d
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


def _max_cap_2d_fast(shell: Shell, threshold: Fraction) -> tuple[int, tuple, int]:
    """Integer-arithmetic version of the exact d=2 candidate scan.

    For the boundary candidate through shell point P the center is
    c(t) = (t0/m) P + t perp(P) with m t = +-sqrt(m^2 - t0^2), so the
    membership sign of n is a(n.P - m) +- (n.perp(P)) sqrt(m^2 b^2 - a^2)
    for t0 = a/b, which needs only integer surd signs.  Returns
    (count, winning candidate spec, sign) for the caller to rebuild the
    exact center; candidate spec is either a shell point ("pt") or a
    boundary point ("bnd").
    """
    m = shell.m
    a, b = threshold.numerator, threshold.denominator
    disc = m * m * b * b - a * a
    pts = shell.points
    dots = {p: [p[0] * q[0] + p[1] * q[1] for q in pts] for p in pts}
    best = (-1, None, 0)
    for i, p in enumerate(pts):
        cnt = sum(1 for d_ in dots[p] if b * d_ >= a)
        if cnt > best[0]:
            best = (cnt, ("pt", p), 0)
    if disc >= 0:
        for p in pts:
            perp = (-p[1], p[0])
            pdots = dots[p]
            for sign in (1, -1):
                cnt = 0
                for n, d_ in zip(pts, pdots):
                    cross = n[0] * perp[0] + n[1] * perp[1]
                    if _int_surd_sign(a * (d_ - m), sign * cross, disc) >= 0:
                        cnt += 1
                if cnt > best[0]:
                    best = (cnt, ("bnd", p), sign)
                if disc == 0:
                    break
    return best


def _halfspace_members(shell: Shell, center: Sequence, threshold: Fraction) -> list[Point]:
    out = []
    for n in shell.points:
        val = None
        for ni, ci in zip(n, center):
            term = ci * ni if isinstance(ci, (Fraction, int)) else ci * QuadSurd(ni)
            val = term if val is None else val + term
        if isinstance(val, QuadSurd):
            if (val - threshold).sign() >= 0:
                out.append(n)
        elif val >= threshold:
            out.append(n)
    return out


def max_cap_count(shell: Shell, radius_sq: Fraction | None = None,
                  mode: CapSearchMode = "exact",
                  grid_resolution: int = 256) -> CapSearchResult:
    """Maximum shell points in a cap of the given squared radius whose center
    lies on the sphere of radius lambda, with a witness cap.

    mode "exact": candidate centers are every shell point plus every solution
    of {n_i . c = threshold (i=1..d-1), |c|^2 = m}; this realizes the
    max-coverage duality exactly (centers may be quadratic surds).
    mode "points": shell-point centers only (fast lower bound for big shells).
    mode "grid": rational unit directions from a stereographic grid; an
    independent cross-check oracle, always a certified lower bound.
    """
    if shell.is_empty:
        return CapSearchResult(0, None, ())
    if radius_sq is None:
        radius_sq = default_cap_radius_sq(shell.m)
    radius_sq = Fraction(radius_sq)
    if radius_sq <= 0:
        raise ValueError("radius_sq must be positive")
    m = shell.m
    threshold = Fraction(m) - radius_sq / 2

    best_count = -1
    best_center: tuple | None = None

    def consider(center: Sequence) -> None:
        nonlocal best_count, best_center
        members = _halfspace_members(shell, center, threshold)
        if len(members) > best_count:
            best_count = len(members)
            best_center = tuple(center)

    if mode == "grid":
        # center = sqrt(m) * direction for rational unit directions; the
        # membership n.c >= threshold needs one surd sign test per point
        best_dir = None
        for direction in _grid_directions(shell.d, grid_resolution):
            cnt = 0
            for n in shell.points:
                s = sum(ni * ci for ni, ci in zip(n, direction))
                if QuadSurd(-threshold, s, m).sign() >= 0:
                    cnt += 1
            if cnt > best_count:
                best_count = cnt
                best_dir = direction
        best_center = tuple(QuadSurd(0, c, m) for c in best_dir)
    elif mode == "points":
        # shell-point centers only: pure integer comparisons
        tn, td = threshold.numerator, threshold.denominator
        for p in shell.points:
            cnt = 0
            for n in shell.points:
                if td * sum(a * b for a, b in zip(n, p)) >= tn:
                    cnt += 1
            if cnt > best_count:
                best_count = cnt
                best_center = as_fraction_vec(p)
    elif shell.d == 2 and mode == "exact":
        count, spec, sign = _max_cap_2d_fast(shell, threshold)
        kind, p = spec
        if kind == "pt":
            best_center = as_fraction_vec(p)
        else:
            disc = m * m * threshold.denominator ** 2 - threshold.numerator ** 2
            perp = (-p[1], p[0])
            best_center = tuple(
                QuadSurd(threshold * pj / m,
                         Fraction(sign * wj, m * threshold.denominator), disc)
                for pj, wj in zip(p, perp))
        best_count = count
    else:
        for p in shell.points:
            consider(as_fraction_vec(p))
        if mode == "exact":
            for subset in combinations(shell.points, shell.d - 1):
                sol = solve_affine(list(subset), [threshold] * (shell.d - 1))
                if sol is None:
                    continue
                particular, kernel = sol
                if len(kernel) != 1:
                    continue
                w = kernel[0]
                alpha = vec_dot(w, w)
                beta = vec_dot(particular, w)
                gamma = vec_dot(particular, particular) - m
                disc = beta * beta - alpha * gamma
                if disc < 0:
                    continue
                root = sqrt_if_perfect_square(disc)
                for sign in (1, -1):
                    if root is not None:
                        t = (-beta + sign * root) / alpha
                        consider(tuple(p + t * wi for p, wi in zip(particular, w)))
                    else:
                        t = QuadSurd(-beta / alpha, Fraction(sign) / alpha, disc)
                        consider(tuple(QuadSurd(p) + t * QuadSurd(wi)
                                       for p, wi in zip(particular, w)))
                    if root is not None and root == 0:
                        break

    members = tuple(_halfspace_members(shell, best_center, threshold))
    witness = Cap(center=best_center, radius_sq=radius_sq)
    return CapSearchResult(best_count, witness, members)


def _grid_directions(d: int, resolution: int) -> Iterable[tuple[Fraction, ...]]:
    """Rational unit vectors from stereographic parameter grids (exactly on
    the unit sphere, so grid caps are genuine caps)."""
    if d == 2:
        for i in range(-resolution, resolution + 1):
            t = Fraction(i, resolution)
            den = 1 + t * t
            v = (Fraction(1 - t * t, 1) / den, 2 * t / den)
            yield v
            yield (-v[0], -v[1])
        yield (Fraction(-1), Fraction(0))
    elif d == 3:
        for i in range(-resolution, resolution + 1):
            for j in range(-resolution, resolution + 1):
                t = Fraction(i, resolution)
                s = Fraction(j, resolution)
                den = 1 + t * t + s * s
                v = (2 * t / den, 2 * s / den, (1 - t * t - s * s) / den)
                yield v
                yield (-v[0], -v[1], -v[2])
    else:
        raise ValueError("grid oracle implemented for d in {2, 3}")


# ---------------------------------------------------------------------------
# band intersection maximization

AnchorMode = Literal["sweep", "lattice"]
DirectionSource = Literal["pairs", "points", "axes"]


@dataclass(frozen=True)
class BandSearchConfig:
    """Candidate family for the band-intersection search.

    directions: explicit frames (tuples of k direction vectors), or for k=1
    the names "pairs" (normals to point differences, d<=3), "points" (shell
    point directions) and "axes" (coordinate directions), combinable.
    anchor_mode "sweep" is the exact maximum over all anchors for each
    candidate frame; "lattice" restricts anchors to shell points.
    """

    directions: tuple = ("pairs", "points")
    anchor_mode: AnchorMode = "sweep"
    width: Fraction = Fraction(1)
    nu_sq: Fraction | None = None


@dataclass(frozen=True)
class BandSearchResult:
    count: int
    witness: BandFamily | None
    members: tuple[Point, ...]


def _pair_normal_directions(shell: Shell) -> list[tuple[Fraction, ...]]:
    """Directions orthogonal to point differences: the 2D perpendicular, or
    in 3D cross products of difference pairs."""
    dirs: set[tuple] = set()
    pts = shell.points
    if shell.d == 2:
        for p, q in combinations(pts, 2):
            dx, dy = p[0] - q[0], p[1] - q[1]
            dirs.add(_normalize_int_dir((-dy, dx)))
    elif shell.d == 3:
        for p, q, r in combinations(pts, 3):
            a = vec_sub(q, p)
            b = vec_sub(r, p)
            cross = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0])
            if any(cross):
                dirs.add(_normalize_int_dir(cross))
    else:
        raise ValueError("pair-normal directions implemented for d in {2, 3}")
    return [as_fraction_vec(v) for v in sorted(dirs)]


def _normalize_int_dir(v: tuple[int, ...]) -> tuple[int, ...]:
    from math import gcd
    g = 0
    for c in v:
        g = gcd(g, abs(c))
    v = tuple(c // g for c in v)
    for c in v:
        if c != 0:
            return v if c > 0 else tuple(-x for x in v)
    raise ValueError("zero direction")


def _candidate_frames(shell: Shell, k: int, config: BandSearchConfig) -> list[tuple]:
    frames: list[tuple] = []
    named: list[str] = []
    for entry in config.directions:
        if isinstance(entry, str):
            named.append(entry)
        else:
            frames.append(tuple(as_fraction_vec(v) for v in entry))
    if named and k != 1:
        raise ValueError("named direction sources apply only to k=1 searches")
    singles: list[tuple[Fraction, ...]] = []
    for name in named:
        if name == "pairs":
            singles.extend(_pair_normal_directions(shell))
        elif name == "points":
            singles.extend(as_fraction_vec(p) for p in shell.points
                           if any(c != 0 for c in p))
        elif name == "axes":
            for i in range(shell.d):
                e = [Fraction(0)] * shell.d
                e[i] = Fraction(1)
                singles.append(tuple(e))
        else:
            raise ValueError(f"unknown direction source {name!r}")
    seen = set()
    for u in singles:
        if u not in seen:
            seen.add(u)
            frames.append((u,))
    return frames


def _sweep_members(values: list[list[Fraction]], lows: tuple, window_sq: list[Fraction]) -> list[int]:
    """Indices whose value lies in [low_j, low_j + w|u_j|] for every j,
    the upper edge compared by squaring (w|u_j| is irrational in general)."""
    npts = len(values[0])
    out = []
    for i in range(npts):
        ok = True
        for j, low in enumerate(lows):
            diff = values[j][i] - low
            if diff < 0 or diff * diff > window_sq[j]:
                ok = False
                break
        if ok:
            out.append(i)
    return out


def _centered_members(values: list[list[Fraction]], centers: tuple, half_sq: list[Fraction]) -> list[int]:
    npts = len(values[0])
    out = []
    for i in range(npts):
        ok = True
        for j, c in enumerate(centers):
            diff = values[j][i] - c
            if diff * diff > half_sq[j]:
                ok = False
                break
        if ok:
            out.append(i)
    return out


def max_band_intersection(shell: Shell, k: int,
                          config: BandSearchConfig | None = None) -> BandSearchResult:
    """Best lattice count over the configured family of k transverse unit
    bands, with witness.

    Always a certified lower bound for the true maximum; for fixed frames in
    sweep mode it is the exact maximum over all anchors for those frames
    (an optimal window can be slid until its lower edge touches a point
    value in every coordinate).
    """
    if not 1 <= k <= shell.d - 1:
        raise ValueError(f"need 1 <= k <= d-1, got k={k}, d={shell.d}")
    if shell.is_empty:
        return BandSearchResult(0, None, ())
    config = config or BandSearchConfig()
    nu_sq = config.nu_sq if config.nu_sq is not None else default_nu_sq(k, shell.d)
    width = Fraction(config.width)
    half = width / 2

    best: tuple[int, list[int], tuple, tuple, str] | None = None

    for frame in _candidate_frames(shell, k, config):
        if len(frame) != k or wedge_norm_sq(frame) == 0:
            continue
        if not is_transverse(frame, nu_sq):
            continue
        values = [[vec_dot(u, as_fraction_vec(p)) for p in shell.points] for u in frame]
        norms_sq = [vec_dot(u, u) for u in frame]
        if config.anchor_mode == "lattice":
            half_sq = [half * half * ns for ns in norms_sq]
            for i in range(len(shell.points)):
                centers = tuple(values[j][i] for j in range(k))
                idx = _centered_members(values, centers, half_sq)
                if best is None or len(idx) > best[0]:
                    best = (len(idx), idx, frame, centers, "lattice")
        else:
            window_sq = [width * width * ns for ns in norms_sq]
            edge_lists = [sorted(set(values[j])) for j in range(k)]
            for lows in product(*edge_lists):
                idx = _sweep_members(values, lows, window_sq)
                if best is None or len(idx) > best[0]:
                    mids = tuple(
                        (min(values[j][i] for i in idx) + max(values[j][i] for i in idx))
                        / 2 for j in range(k)) if idx else lows
                    best = (len(idx), idx, frame, mids, "sweep")

    if best is None:
        return BandSearchResult(0, None, ())
    count, member_idx, frame, centers, _mode = best
    sol = solve_affine(frame, centers)
    if sol is None:
        raise AssertionError("transverse frame must have full rank")
    anchor, _ = sol
    bands = tuple(UnitBand(direction=u, anchor=anchor, half_width=half) for u in frame)
    witness = BandFamily(bands=bands, nu_sq=nu_sq)
    got = [p for p in shell.points if witness.contains(p)]
    # midpoint anchoring may only widen the member set, never lose it
    assert len(got) >= count
    return BandSearchResult(len(got), witness, tuple(got))


def max_band_k1_integer(shell: Shell, directions: Sequence[tuple[int, ...]],
                        width: Fraction = Fraction(1)) -> tuple[int, tuple[int, ...] | None]:
    """Fast exact anchor sweep for k=1 over integer directions.

    Pure integer arithmetic: for integer point values v and window w|u|,
    v - v_i <= w|u| iff v - v_i <= floor(sqrt(w^2 |u|^2)).  Returns the best
    count and direction; meant for large sweeps where building witness
    objects per shell would dominate.
    """
    if shell.is_empty:
        return 0, None
    w2 = width * width
    best_count, best_dir = 0, None
    for u in directions:
        norm_sq = sum(c * c for c in u)
        if norm_sq == 0:
            continue
        bound = w2 * norm_sq
        limit = isqrt(bound.numerator // bound.denominator)
        vals = sorted(sum(c * p for c, p in zip(u, pt)) for pt in shell.points)
        hi = 0
        for lo in range(len(vals)):
            if hi < lo:
                hi = lo
            while hi + 1 < len(vals) and vals[hi + 1] - vals[lo] <= limit:
                hi += 1
            if hi - lo + 1 > best_count:
                best_count = hi - lo + 1
                best_dir = tuple(u)
    return best_count, best_dir
