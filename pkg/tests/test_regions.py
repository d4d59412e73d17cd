import random
from fractions import Fraction

import pytest

from capbands.regions import (
    BandFamily,
    BandSearchConfig,
    Cap,
    DyadicBand,
    UnitBand,
    band_count,
    band_family_count,
    cap_count,
    default_cap_radius_sq,
    default_nu_sq,
    dyadic_decompose,
    dyadic_level,
    dyadic_level_bands,
    dyadic_sum_report,
    is_transverse,
    max_band_intersection,
    max_band_k1_integer,
    max_cap_count,
    wedge_norm_sq,
)
from capbands.shell import enumerate_shell

F = Fraction


@pytest.fixture(scope="module")
def sh25():
    return enumerate_shell(2, 25)


def test_cap_count_examples(sh25):
    count, members = cap_count(sh25, Cap(center=(F(7, 2), F(7, 2)), radius_sq=F(5)))
    assert count == 2 and set(members) == {(3, 4), (4, 3)}
    count, _ = cap_count(sh25, Cap(center=(F(0), F(0)), radius_sq=F(25)))
    assert count == 12
    count, members = cap_count(sh25, Cap(center=(F(100), F(100)), radius_sq=F(1)))
    assert count == 0 and members == []


def test_cap_validation(sh25):
    with pytest.raises(ValueError):
        Cap(center=(F(0), F(0)), radius_sq=F(0))
    with pytest.raises(ValueError):
        cap_count(sh25, Cap(center=(F(0), F(0), F(0)), radius_sq=F(1)))


def test_band_count_examples(sh25):
    count, members = band_count(sh25, UnitBand(direction=(1, 0), anchor=(5, 0)))
    assert count == 1 and members == [(5, 0)]
    count, members = band_count(sh25, UnitBand(direction=(1, 1), anchor=(3, 4)))
    assert count == 2 and set(members) == {(3, 4), (4, 3)}
    count, _ = band_count(sh25, UnitBand(direction=(1, 1), anchor=(0, 0)))
    assert count == 0


def test_band_validation():
    with pytest.raises(ValueError, match="zero direction"):
        UnitBand(direction=(0, 0), anchor=(0, 0))


def test_wedge_norm_examples():
    assert wedge_norm_sq([(1, 0, 0), (0, 1, 0)]) == 1
    assert wedge_norm_sq([(1, 0, 1), (0, 1, 1)]) == 3
    assert wedge_norm_sq([(1, 1), (2, 2)]) == 0


def test_transversality_examples():
    assert is_transverse([(1, 0, 0), (0, 1, 0)], F(1, 4))
    assert is_transverse([(1, 0, 1), (0, 1, 1)], F(1, 4))  # ratio^2 = 3/4
    assert not is_transverse([(1, 1, 0), (2, 2, 0)], F(1, 4))
    assert default_nu_sq(2, 3) == F(1, 4)
    assert default_nu_sq(1, 2) == F(1, 2)


def test_transversality_scale_invariance():
    rng = random.Random(4)
    for _ in range(100):
        u = tuple(rng.randint(-5, 5) for _ in range(3))
        v = tuple(rng.randint(-5, 5) for _ in range(3))
        if not any(u) or not any(v):
            continue
        c1 = F(rng.randint(1, 9), rng.randint(1, 9))
        c2 = F(-rng.randint(1, 9), rng.randint(1, 9))
        scaled = [tuple(c1 * x for x in u), tuple(c2 * x for x in v)]
        assert is_transverse([u, v], F(1, 4)) == is_transverse(scaled, F(1, 4))


def test_band_family_requires_transversality():
    b1 = UnitBand(direction=(1, 0, 0), anchor=(0, 0, 0))
    b2 = UnitBand(direction=(0, 1, 0), anchor=(0, 0, 0))
    fam = BandFamily(bands=(b1, b2))
    assert fam.nu_sq == F(1, 4)
    b_parallel = UnitBand(direction=(2, 0, 0), anchor=(0, 0, 0))
    with pytest.raises(ValueError, match="transverse"):
        BandFamily(bands=(b1, b_parallel))
    with pytest.raises(ValueError):
        BandFamily(bands=(b1,) * 3)  # k = d


# ---------------------------------------------------------------------------
# exact cap maximization

def test_max_cap_shell_2_25(sh25):
    res = max_cap_count(sh25, F(5))
    assert res.count == 2
    assert {tuple(abs(c) for c in p) for p in res.members} == {(4, 3), (3, 4)}
    # the witness certifies its own count
    assert sum(1 for p in sh25.points if res.witness.contains(p)) == 2


def test_max_cap_whole_sphere(sh25):
    assert max_cap_count(sh25, F(100)).count == 12


def test_max_cap_shell_2_1():
    # the grid oracle (the spec's own cross-check) puts both e1 and e2 in one
    # radius-1 cap centered at (1/2, sqrt(3)/2), so the maximum is 2
    sh = enumerate_shell(2, 1)
    exact = max_cap_count(sh, F(1))
    grid = max_cap_count(sh, F(1), mode="grid", grid_resolution=720)
    assert exact.count == grid.count == 2


def test_max_cap_empty_shell():
    res = max_cap_count(enumerate_shell(2, 3))
    assert res.count == 0 and res.witness is None


def test_max_cap_monotone_in_radius(sh25):
    counts = [max_cap_count(sh25, r2).count for r2 in (F(1), F(2), F(5), F(20), F(50), F(100))]
    assert counts == sorted(counts)


def test_max_cap_exact_vs_grid():
    rng = random.Random(8)
    for m in (25, 65, 85, 325):
        sh = enumerate_shell(2, m)
        for r2 in (default_cap_radius_sq(m), F(2 * rng.randint(1, 6))):
            exact = max_cap_count(sh, r2).count
            grid = max_cap_count(sh, r2, mode="grid", grid_resolution=256).count
            assert grid <= exact
            assert exact - grid <= 0, (m, r2)  # dense grid should find the optimum here


def test_max_cap_3d():
    sh = enumerate_shell(3, 9)
    res = max_cap_count(sh, F(3))
    grid = max_cap_count(sh, F(3), mode="grid", grid_resolution=24)
    assert res.count >= grid.count
    assert res.count >= 1
    points_only = max_cap_count(sh, F(3), mode="points")
    assert points_only.count <= res.count


def test_default_radius_is_floor_lambda():
    assert default_cap_radius_sq(25) == 5
    assert default_cap_radius_sq(26) == 5


# ---------------------------------------------------------------------------
# band intersection search

def test_k1_pair_search_finds_neighbors(sh25):
    config = BandSearchConfig(directions=("pairs",), anchor_mode="sweep")
    res = max_band_intersection(sh25, 1, config)
    assert res.count >= 2
    # a band orthogonal to (1,1) through (3,4),(4,3) is among the candidates
    band = UnitBand(direction=(1, 1), anchor=(3, 4))
    assert band_count(sh25, band)[0] == 2


def test_k2_lattice_anchor_search():
    sh = enumerate_shell(3, 2)
    config = BandSearchConfig(directions=(((1, 0, 0), (0, 1, 0)),), anchor_mode="lattice")
    res = max_band_intersection(sh, 2, config)
    assert res.count == 2
    # anchored at (1,1,0) the same frame captures exactly that one point
    fam = BandFamily(bands=(UnitBand(direction=(1, 0, 0), anchor=(1, 1, 0)),
                            UnitBand(direction=(0, 1, 0), anchor=(1, 1, 0))))
    count, members = band_family_count(sh, fam)
    assert count == 1 and members == [(1, 1, 0)]


def test_k2_sweep_beats_lattice():
    sh = enumerate_shell(3, 2)
    frame = ((1, 0, 0), (0, 1, 0))
    sweep = max_band_intersection(sh, 2, BandSearchConfig(directions=(frame,)))
    lattice = max_band_intersection(
        sh, 2, BandSearchConfig(directions=(frame,), anchor_mode="lattice"))
    assert sweep.count >= lattice.count
    assert sweep.count == 5  # window x,y in [0,1] holds (1,1,0),(1,0,±1),(0,1,±1)


def test_invalid_k(sh25):
    with pytest.raises(ValueError):
        max_band_intersection(sh25, 2)  # k = d
    with pytest.raises(ValueError):
        max_band_intersection(sh25, 0)


def test_band_search_witness_is_verifiable(sh25):
    res = max_band_intersection(sh25, 1, BandSearchConfig(directions=("pairs", "points")))
    got = [p for p in sh25.points if res.witness.contains(p)]
    assert len(got) == res.count
    assert tuple(got) == res.members


def test_tangent_band_realizes_cap():
    # where a point-direction band holds the best cap's members, the band
    # search must be at least as good as the cap count
    for m in (25, 50, 65, 100, 325):
        sh = enumerate_shell(2, m)
        cap = max_cap_count(sh)
        config = BandSearchConfig(directions=("pairs", "points"), anchor_mode="sweep")
        band = max_band_intersection(sh, 1, config)
        realizable = False
        for u in [p for p in sh.points if any(p)]:
            bb = UnitBand(direction=u, anchor=max(sh.points))
            vals = sorted(Fraction(sum(a * b for a, b in zip(u, p))) for p in cap.members)
            if (vals[-1] - vals[0]) ** 2 <= Fraction(sum(c * c for c in u)):
                realizable = True
        if realizable:
            assert band.count >= cap.count, m


def test_max_band_k1_integer_matches_general(sh25):
    dirs = [(1, 1), (1, 0), (2, -1)]
    fast_count, fast_dir = max_band_k1_integer(sh25, dirs)
    config = BandSearchConfig(directions=tuple((d,) for d in dirs))
    general = max_band_intersection(sh25, 1, config)
    assert fast_count == general.count


# ---------------------------------------------------------------------------
# dyadic decomposition

def test_dyadic_levels_examples(sh25):
    assert dyadic_level((1, 0), (5, 0), (3, 4)) == 1
    assert dyadic_level((1, 0), (5, 0), (5, 0)) == 0
    assert dyadic_level((0, 1), (0, 5), (0, -5)) == 4


def test_dyadic_partition(sh25):
    levels = dyadic_decompose(sh25, (1, 0), (5, 0))
    seen = [p for pts in levels.values() for p in pts]
    assert sorted(seen) == sorted(sh25.points)
    assert (5, 0) in levels[0]
    with pytest.raises(ValueError):
        dyadic_decompose(sh25, (1, 0), (6, 0))


def test_dyadic_level_band_cover(sh25):
    anchor = (5, 0)
    for u in [(1, 1), (1, 0), (2, -1)]:
        levels = dyadic_decompose(sh25, u, anchor)
        for p_level, pts in levels.items():
            bands = dyadic_level_bands(u, pts, p_level)
            assert len(bands) <= 2 ** (p_level + 1) + 2
            for n in pts:
                assert any(b.contains(n) for b in bands), (u, p_level, n)


def test_dyadic_band_membership_annulus():
    band = DyadicBand(direction=(1, 0), anchor=(5, 0), level=1)
    assert band.contains((3, 4))     # |delta.u| = 2, in (1, 2]
    assert not band.contains((5, 0))
    assert not band.contains((0, 5))  # |delta.u| = 5, level 3


def test_dyadic_sum_report(sh25):
    rep = dyadic_sum_report(sh25, (1, 0), (5, 0))
    assert sum(rep["counts"].values()) == 12
    assert rep["weighted_sum"] > 0
    print(f"\ndyadic sum report m=25: {rep}")


def test_membership_float_agreement(sh25):
    # away from ties the exact predicates agree with float evaluation
    rng = random.Random(10)
    for _ in range(100):
        c = (F(rng.randint(-60, 60), 7), F(rng.randint(-60, 60), 7))
        r2 = F(rng.randint(1, 900), 7)
        cap = Cap(center=c, radius_sq=r2)
        for p in sh25.points:
            exact = cap.contains(p)
            fl = (p[0] - float(c[0])) ** 2 + (p[1] - float(c[1])) ** 2
            if abs(fl - float(r2)) > 1e-9:
                assert exact == (fl < float(r2))
