"""Eigenfunctions on shells and their restriction norms on geodesic planes.

An eigenfunction is a complex coefficient map on a shell; its squared L^2
norm on the parameterized plane patch x0 + x_1 u_1 + ... + x_k u_k,
x in [-1,1]^k, with the induced measure |u_1 ^ ... ^ u_k| dx, has the exact
closed form

    |wedge| * sum_{m,n} c_m conj(c_n) e^(i(m-n).x0) prod_j 2 sinc((m-n).u_j)

with sinc(t) = sin(t)/t and sinc(0) = 1.  Phases (m-n).u_j are rational for
rational frames, so the sinc(0) branch is decided by exact equality of
rationals, never by a float comparison.  The kernel double sum is evaluated
with numpy (pairwise summation) in O(|support|^2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, sin

import numpy as np

from .rational_geometry import as_fraction_vec, integer_kernel, vec_dot, vec_sub
from .regions import BandFamily, CapSearchResult, max_cap_count, wedge_norm_sq
from .shell import Point, Shell, enumerate_shell

NORMALIZATION_TOL = 1e-12
SINC_AT_1 = sin(1.0)  # sin(1)/1, the lower kernel bound on phases in [-1, 1]


def usinc(x: np.ndarray | float):
    """sin(x)/x with the removable singularity filled in as 1."""
    return np.sinc(np.asarray(x, dtype=float) / np.pi)


# ---------------------------------------------------------------------------
# eigenfunctions

class Eigenfunction:
    """L^2-normalized complex coefficients supported on a shell."""

    def __init__(self, shell: Shell, coeffs: dict[Point, complex]):
        support = set(shell.points)
        for p in coeffs:
            if p not in support:
                raise ValueError(f"coefficient at {p} is outside the shell")
        total = sum(abs(c) ** 2 for c in coeffs.values())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"coefficients are not normalized: sum |c|^2 = {total}")
        self.shell = shell
        self.coeffs = {p: complex(c) for p, c in coeffs.items() if c != 0}

    @classmethod
    def uniform(cls, shell: Shell, members) -> "Eigenfunction":
        members = list(members)
        if not members:
            raise ValueError("empty support")
        c = 1.0 / np.sqrt(len(members))
        return cls(shell, {tuple(p): c for p in members})

    @classmethod
    def random(cls, shell: Shell, rng: np.random.Generator,
               support_size: int | None = None) -> "Eigenfunction":
        pts = list(shell.points)
        if support_size is not None and support_size < len(pts):
            idx = rng.choice(len(pts), size=support_size, replace=False)
            pts = [pts[i] for i in sorted(idx)]
        raw = rng.standard_normal(len(pts)) + 1j * rng.standard_normal(len(pts))
        raw /= np.linalg.norm(raw)
        return cls(shell, dict(zip(pts, raw)))

    def support(self) -> list[Point]:
        return sorted(self.coeffs)

    def to_json(self) -> str:
        return json.dumps({
            "m": self.shell.m,
            "d": self.shell.d,
            "coeffs": [{"n": list(p), "re": c.real, "im": c.imag}
                       for p, c in sorted(self.coeffs.items())],
        })

    @classmethod
    def from_json(cls, text: str, shell: Shell | None = None) -> "Eigenfunction":
        obj = json.loads(text)
        if shell is None:
            shell = enumerate_shell(int(obj["d"]), int(obj["m"]))
        elif shell.d != obj["d"] or shell.m != obj["m"]:
            raise ValueError("shell does not match the eigenfunction file")
        coeffs = {tuple(int(x) for x in e["n"]): complex(e["re"], e["im"])
                  for e in obj["coeffs"]}
        return cls(shell, coeffs)


# ---------------------------------------------------------------------------
# geodesic submanifolds

def _find_pivots(frame: tuple[tuple[Fraction, ...], ...]) -> list[int] | None:
    """Injective pivot assignment certifying the normalized frame form:
    u_j has entry 1 at its pivot, every other frame vector vanishes there."""
    k = len(frame)
    candidates = []
    for j in range(k):
        cols = []
        for i in range(len(frame[j])):
            if frame[j][i] == 1 and all(frame[jj][i] == 0 for jj in range(k) if jj != j):
                cols.append(i)
        if not cols:
            return None
        candidates.append(cols)

    assignment: list[int] = []

    def backtrack(j: int) -> bool:
        if j == k:
            return True
        for col in candidates[j]:
            if col not in assignment:
                assignment.append(col)
                if backtrack(j + 1):
                    return True
                assignment.pop()
        return False

    return assignment if backtrack(0) else None


class GeodesicSubmanifold:
    """Frame u_1..u_k in normalized form (pivot entries 1, all remaining
    entries of absolute value <= 1 after relabeling) with a base point; the
    parameter box is [-1,1]^k throughout."""

    def __init__(self, frame, base=None):
        frame = tuple(as_fraction_vec(u) for u in frame)
        k = len(frame)
        d = len(frame[0])
        if not 1 <= k <= d - 1:
            raise ValueError(f"need 1 <= k <= d-1, got k={k}, d={d}")
        pivots = _find_pivots(frame)
        if pivots is None:
            raise ValueError("frame is not in normalized form (no pivot assignment)")
        for u in frame:
            if any(abs(c) > 1 for c in u):
                raise ValueError("frame entries must have absolute value <= 1")
            if vec_dot(u, u) > d - k + 1:
                raise ValueError("frame vector norm exceeds sqrt(d-k+1)")
        w2 = wedge_norm_sq(frame)
        if not 1 <= w2 <= Fraction((d - k + 1) ** k):
            raise ValueError(f"wedge norm squared {w2} outside [1, (d-k+1)^k]")
        self.frame = frame
        self.k = k
        self.d = d
        self.base = as_fraction_vec(base) if base is not None else tuple([Fraction(0)] * d)
        self.wedge_sq = w2

    @classmethod
    def from_slope(cls, a: Fraction, base=None) -> "GeodesicSubmanifold":
        """The 2D geodesic x -> (x, a x), |a| <= 1."""
        a = Fraction(a)
        if abs(a) > 1:
            raise ValueError("slope must satisfy |a| <= 1 (exchange coordinates)")
        return cls(frame=((Fraction(1), a),), base=base)

    def wedge_norm(self) -> float:
        return float(np.sqrt(float(self.wedge_sq)))


# ---------------------------------------------------------------------------
# the kernel evaluation

def _phase_data(support: list[Point], frame) -> tuple[np.ndarray, np.ndarray]:
    """Float phase values and exact-equality group ids per frame vector."""
    floats = []
    groups = []
    for u in frame:
        vals = [vec_dot(as_fraction_vec(p), u) for p in support]
        floats.append(np.array([float(v) for v in vals]))
        uniq: dict[Fraction, int] = {}
        gid = np.empty(len(vals), dtype=np.int64)
        for i, v in enumerate(vals):
            gid[i] = uniq.setdefault(v, len(uniq))
        groups.append(gid)
    return np.stack(floats), np.stack(groups)


def restriction_norm_sq(e: Eigenfunction, sub: GeodesicSubmanifold) -> float:
    """Closed-form squared restriction norm; real and >= 0 up to 1e-10."""
    if sub.d != e.shell.d:
        raise ValueError("dimension mismatch")
    support = e.support()
    if not support:
        return 0.0
    coeffs = np.array([e.coeffs[p] for p in support])
    base_phase = np.array([float(vec_dot(as_fraction_vec(p), sub.base)) for p in support])
    v = coeffs * np.exp(1j * base_phase)

    floats, groups = _phase_data(support, sub.frame)
    kernel = np.ones((len(support), len(support)))
    for j in range(sub.k):
        diff = floats[j][:, None] - floats[j][None, :]
        s = usinc(diff)
        # exact-zero phases decided by rational equality, not float closeness
        s[groups[j][:, None] == groups[j][None, :]] = 1.0
        kernel *= 2.0 * s
    val = v @ (kernel @ np.conj(v))
    scale = max(1.0, abs(val))
    if abs(val.imag) > 1e-10 * scale:
        raise AssertionError(f"kernel value has imaginary part {val.imag}")
    if val.real < -1e-10 * scale:
        raise AssertionError(f"kernel value is negative: {val.real}")
    return float(sub.wedge_norm() * max(val.real, 0.0))


def quadrature_restriction_norm(e: Eigenfunction, sub: GeodesicSubmanifold,
                                resolution: int = 2048) -> float:
    """Composite-Simpson quadrature of |e|^2 over the parameter box.

    Test oracle only: converges to restriction_norm_sq as the resolution
    grows, but never replaces the closed form.
    """
    if sub.d != e.shell.d:
        raise ValueError("dimension mismatch")
    support = e.support()
    if not support:
        return 0.0
    res = resolution + (resolution % 2)
    t = np.linspace(-1.0, 1.0, res + 1)
    w = np.ones(res + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= (2.0 / res) / 3.0

    coeffs = np.array([e.coeffs[p] for p in support])
    base_phase = np.array([float(vec_dot(as_fraction_vec(p), sub.base)) for p in support])
    v = coeffs * np.exp(1j * base_phase)
    omega = np.array([[float(vec_dot(as_fraction_vec(p), u)) for u in sub.frame]
                      for p in support])  # (npts, k)

    if sub.k == 1:
        field = np.tensordot(v, np.exp(1j * np.outer(omega[:, 0], t)), axes=(0, 0))
        integral = float(np.sum(np.abs(field) ** 2 * w))
    elif sub.k == 2:
        t1 = t[:, None]
        t2 = t[None, :]
        field = np.zeros((res + 1, res + 1), dtype=complex)
        for amp, (w1, w2) in zip(v, omega):
            field += amp * np.exp(1j * (w1 * t1 + w2 * t2))
        integral = float(np.sum(np.abs(field) ** 2 * np.outer(w, w)))
    else:
        raise NotImplementedError("quadrature oracle supports k <= 2")
    return sub.wedge_norm() * integral


# ---------------------------------------------------------------------------
# extremal constructions

@dataclass(frozen=True)
class ExtremalReport:
    eigenfunction: Eigenfunction
    submanifold: GeodesicSubmanifold
    count: int
    norm_sq: float
    baseline: float  # |wedge| * 2^k
    ratio: float
    max_abs_phase: float

    def bracket_holds(self) -> bool:
        lo = SINC_AT_1 ** self.submanifold.k * self.count
        return bool(lo - 1e-9 <= self.ratio <= self.count + 1e-9)


def _pairwise_phase_bound(members: list[Point], u) -> Fraction:
    worst = Fraction(0)
    for p, q in combinations(members, 2):
        t = abs(vec_dot(as_fraction_vec(vec_sub(p, q)), u))
        worst = max(worst, t)
    return worst


def find_flat_direction(members: list[Point]) -> tuple[Fraction, ...]:
    """A normalized direction u (pivot entry 1, others <= 1 in absolute
    value) with all pairwise phases |(m - n) . u| <= 1, minimizing the worst
    phase among the candidates considered.

    If the pair differences do not span the whole space the orthogonal
    complement gives a direction with all phases exactly 0; otherwise (only
    possible in the plane for points on a circle) the 2D slope candidates
    from single differences and their crossings realize the piecewise-linear
    minimum.  Raises if every candidate leaves a phase above 1.
    """
    members = sorted(set(map(tuple, members)))
    j = len(members[0])
    if len(members) == 1:
        return (Fraction(1),) + (Fraction(0),) * (j - 1)
    diffs = [vec_sub(p, members[0]) for p in members[1:]]
    kernel = integer_kernel(diffs)
    if kernel:
        best = None
        for w in kernel:
            pivot = max(range(j), key=lambda i: abs(w[i]))
            if w[pivot] == 0:
                continue
            u = tuple(Fraction(c, w[pivot]) for c in w)
            if all(abs(c) <= 1 for c in u):
                key = tuple(map(abs, u))
                if best is None or key < best[0]:
                    best = (key, u)
        if best is not None:
            return best[1]
    if j != 2:
        raise ValueError("no admissible flat direction found for these members")

    # 2D: minimize max |d1 + a d2| (u = (1, a)) and symmetrically (a, 1)
    pair_diffs = [vec_sub(p, q) for p, q in combinations(members, 2)]
    best = None
    for swap in (False, True):
        ds = [(dd[1], dd[0]) if swap else (dd[0], dd[1]) for dd in pair_diffs]
        cands = {Fraction(0), Fraction(1), Fraction(-1)}
        for d1, d2 in ds:
            if d2 != 0:
                cands.add(Fraction(-d1, d2))
        for (a1, b1), (a2, b2) in combinations(ds, 2):
            for s in (1, -1):
                den = b1 - s * b2
                if den != 0:
                    cands.add(Fraction(-(a1 - s * a2), den))
        for a in cands:
            if abs(a) > 1:
                continue
            worst = max(abs(d1 + a * d2) for d1, d2 in ds)
            u = (a, Fraction(1)) if swap else (Fraction(1), a)
            key = (worst, abs(a), a, swap)
            if best is None or key < best[0]:
                best = (key, u, worst)
    if best is None or best[2] > 1:
        raise ValueError("members violate the pairwise unit-phase condition")
    return best[1]


def _build_uniform(shell: Shell, members, frame) -> ExtremalReport:
    members = sorted(map(tuple, members))
    sub = GeodesicSubmanifold(frame=frame)
    worst = Fraction(0)
    for u in sub.frame:
        worst = max(worst, _pairwise_phase_bound(members, u))
    if worst > 1:
        raise ValueError(f"pairwise phase {worst} exceeds 1 for the chosen frame")
    e = Eigenfunction.uniform(shell, members)
    norm_sq = float(restriction_norm_sq(e, sub))
    baseline = float(sub.wedge_norm() * 2 ** sub.k)
    return ExtremalReport(eigenfunction=e, submanifold=sub, count=len(members),
                          norm_sq=norm_sq, baseline=baseline,
                          ratio=norm_sq / baseline, max_abs_phase=float(worst))


def build_extremal_cap_2d(shell: Shell, members) -> ExtremalReport:
    """Uniform coefficients on a 2D cap, restricted to the geodesic whose
    direction keeps every pairwise phase in [-1, 1]; its norm ratio then
    sits in the sinc bracket around the cap count."""
    if shell.d != 2:
        raise ValueError("2D construction needs a planar shell")
    members = sorted(map(tuple, members))
    if not members:
        raise ValueError("empty cap")
    u = find_flat_direction(members)
    return _build_uniform(shell, members, (u,))


def build_extremal_band_intersection(shell: Shell, family: BandFamily) -> ExtremalReport:
    """Uniform coefficients on the lattice points of a transverse band
    intersection, restricted to the plane spanned by the band directions."""
    members = [p for p in shell.points if family.contains(p)]
    if not members:
        raise ValueError("the band intersection contains no lattice points")
    frame = tuple(b.direction for b in family.bands)
    return _build_uniform(shell, members, frame)


def build_extremal_subsphere_cap(shell: Shell, k: int) -> ExtremalReport:
    """Cap construction on the coordinate sub-sphere of dimension d-k.

    Takes the best cap of the sub-shell Z^(d-k+1) on the section where the
    last k-1 coordinates vanish, then restricts to the plane spanned by the
    flat direction of that cap and the k-1 remaining coordinate axes."""
    d, m = shell.d, shell.m
    if not 1 <= k <= d - 1:
        raise ValueError(f"need 1 <= k <= d-1, got k={k}")
    j = d - k + 1
    sub_shell = enumerate_shell(j, m)
    if sub_shell.is_empty:
        raise ValueError(f"coordinate sub-shell Z^{j} on m={m} is empty")
    cap: CapSearchResult = max_cap_count(sub_shell)
    u_sub = find_flat_direction(list(cap.members))
    zeros = (Fraction(0),) * (k - 1)
    u1 = tuple(u_sub) + zeros
    frame = [u1]
    for i in range(k - 1):
        e = [Fraction(0)] * d
        e[j + i] = Fraction(1)
        frame.append(tuple(e))
    members = [p + (0,) * (k - 1) for p in cap.members]
    return _build_uniform(shell, members, tuple(frame))


# ---------------------------------------------------------------------------
# hemisphere split and rational-slope bounds

def hemisphere_split(shell: Shell, slopes) -> tuple[list[Point], list[Point]]:
    """Split the shell by sign of a_1 x_1 + ... + a_(d-1) x_(d-1) - x_d.

    The affine lines x_i + a_i x_d = t_i meet the sphere in at most two
    points which fall on opposite sides, so on each side the integer fiber
    keys (q_i x_i + p_i x_d) identify points uniquely (checked separately).
    """
    slopes = tuple(Fraction(a) for a in slopes)
    if len(slopes) != shell.d - 1:
        raise ValueError("need d-1 slopes")
    if any(abs(a) > 1 for a in slopes):
        raise ValueError("slopes must satisfy |a| <= 1")
    plus, minus = [], []
    for p in shell.points:
        val = sum(a * x for a, x in zip(slopes, p[:-1])) - p[-1]
        (plus if val >= 0 else minus).append(p)
    return plus, minus


def fiber_keys(point: Point, slopes) -> tuple[int, ...]:
    keys = []
    for a, x in zip((Fraction(s) for s in slopes), point[:-1]):
        keys.append(a.denominator * x + a.numerator * point[-1])
    return tuple(keys)


def fiber_injectivity_report(shell: Shell, slopes) -> dict:
    """Maximum number of same-side shell points sharing one fiber key."""
    plus, minus = hemisphere_split(shell, slopes)
    worst = 0
    for side in (plus, minus):
        seen: dict[tuple[int, ...], int] = {}
        for p in side:
            key = fiber_keys(p, slopes)
            seen[key] = seen.get(key, 0) + 1
        if seen:
            worst = max(worst, max(seen.values()))
    return {"max_fiber_multiplicity": worst, "plus": len(plus), "minus": len(minus)}


def rational_slope_norm_bound(shell: Shell, p: int, q: int,
                              samples: int = 16, seed: int = 0) -> dict:
    """Largest observed norm^2 on the slope-p/q geodesic over a seeded
    sample of eigenfunctions (the extremal cap plus random ones), reported
    together with its ratio to |q|."""
    if q == 0:
        raise ValueError("q must be nonzero")
    g = gcd(abs(p), abs(q))
    p, q = p // g, q // g
    if abs(p) > abs(q):
        raise ValueError("need |p| <= |q| (exchange coordinates)")
    sub = GeodesicSubmanifold.from_slope(Fraction(p, q))
    rng = np.random.default_rng(seed)
    worst = 0.0
    cap = max_cap_count(shell)
    if cap.count:
        e = Eigenfunction.uniform(shell, cap.members)
        worst = max(worst, restriction_norm_sq(e, sub))
    for _ in range(samples):
        e = Eigenfunction.random(shell, rng)
        worst = max(worst, restriction_norm_sq(e, sub))
    return {"max_norm_sq": worst, "q": abs(q), "ratio_to_q": worst / abs(q)}


# ---------------------------------------------------------------------------
# truncated discrete Hilbert-type operator

def hilbert_truncated_norm(mu: float, N: int, tol: float = 1e-8,
                           max_iter: int = 50000, seed: int = 0) -> float:
    """Largest singular value of the (2N+1)-truncation of the kernel
    sin(mu (t-s))/(t-s) (diagonal mu), by power iteration to the given
    value tolerance.

    The matrix is symmetric positive semidefinite Toeplitz, so the largest
    eigenvalue is the norm and each matrix-vector product is a circular
    convolution done with the FFT.
    """
    if abs(mu) > 1:
        raise ValueError("|mu| must be <= 1")
    if N < 1:
        raise ValueError("N must be >= 1")
    if mu == 0.0:
        return 0.0
    n = 2 * N + 1
    r = np.arange(-2 * N, 2 * N + 1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        kern = np.sin(mu * r) / r
    kern[2 * N] = mu
    size = 1
    while size < len(kern) + n:
        size *= 2
    fk = np.fft.rfft(kern, size)

    def matvec(x: np.ndarray) -> np.ndarray:
        conv = np.fft.irfft(fk * np.fft.rfft(x, size), size)
        return conv[2 * N: 2 * N + n]

    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    rho_prev = -np.inf
    for _ in range(max_iter):
        w = matvec(v)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 0.0
        v = w / norm_w
        rho = float(v @ matvec(v))
        if abs(rho - rho_prev) <= tol * max(1.0, abs(rho)):
            return rho
        rho_prev = rho
    return rho_prev
