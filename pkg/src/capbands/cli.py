"""Command-line interface.

All exact parameters (rationals) are parsed from strings like "5" or "5/2";
floats never enter exact predicates.  Output is JSON on stdout or a file,
CSV for sweeps.  Rerunning any verb with the same arguments and seed yields
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import mpmath as mp

from . import band3d, quadratic_counting, regions, restriction, shell as shell_mod
from .rational_geometry import circumcenter, plane_through


def _parse_point(text: str) -> tuple[int, ...]:
    return tuple(int(p) for p in text.split(","))


def _parse_ratvec(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(p) for p in text.split(","))


def _parse_frame(text: str) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(_parse_ratvec(part) for part in text.split(";"))


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return _frac_str(obj)
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (int, float, str)) or obj is None:
        return obj
    return repr(obj)


def _emit(args, payload: dict) -> None:
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=True)
    out = getattr(args, "output", None)
    if out is None and os.environ.get("CAPBANDS_OUTDIR") and getattr(args, "verb", None):
        out = os.path.join(os.environ["CAPBANDS_OUTDIR"], f"{args.verb}.json")
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_enumerate(args) -> int:
    sh = shell_mod.enumerate_shell(args.d, args.m)
    _emit(args, {"d": sh.d, "m": sh.m, "count": len(sh), "points": [list(p) for p in sh.points]})
    return 0


def _cmd_count_cap(args) -> int:
    sh = shell_mod.enumerate_shell(args.d, args.m)
    cap = regions.Cap(center=_parse_ratvec(args.center), radius_sq=Fraction(args.radius_sq))
    count, members = regions.cap_count(sh, cap)
    _emit(args, {"count": count, "members": [list(p) for p in members],
                 "witness": {"center": list(cap.center), "radius_sq": cap.radius_sq}})
    return 0


def _cmd_count_band(args) -> int:
    sh = shell_mod.enumerate_shell(args.d, args.m)
    band = regions.UnitBand(direction=_parse_ratvec(args.direction),
                            anchor=_parse_ratvec(args.anchor),
                            half_width=Fraction(args.width) / 2)
    count, members = regions.band_count(sh, band)
    _emit(args, {"count": count, "members": [list(p) for p in members],
                 "witness": {"direction": list(band.direction), "anchor": list(band.anchor),
                             "half_width": band.half_width}})
    return 0


def _cmd_extremal_cap(args) -> int:
    sh = shell_mod.enumerate_shell(args.d, args.m)
    radius_sq = Fraction(args.radius_sq) if args.radius_sq else None
    res = regions.max_cap_count(sh, radius_sq, mode=args.mode, grid_resolution=args.grid_resolution)
    payload = {"count": res.count, "members": [list(p) for p in res.members],
               "witness": None}
    if res.witness is not None:
        payload["witness"] = {"center": [repr(c) for c in res.witness.center],
                              "radius_sq": res.witness.radius_sq}
    _emit(args, payload)
    return 0


def _cmd_extremal_bands(args) -> int:
    sh = shell_mod.enumerate_shell(args.d, args.m)
    if args.directions:
        dirs: tuple = (_parse_frame(args.directions),) if args.k > 1 else tuple(
            (v,) for v in _parse_frame(args.directions))
    else:
        dirs = ("pairs", "points")
    config = regions.BandSearchConfig(directions=dirs, anchor_mode=args.anchor_mode,
                                      width=Fraction(args.width))
    res = regions.max_band_intersection(sh, args.k, config)
    payload = {"count": res.count, "members": [list(p) for p in res.members], "witness": None}
    if res.witness is not None:
        payload["witness"] = {"bands": [{"direction": list(b.direction),
                                         "anchor": list(b.anchor),
                                         "half_width": b.half_width}
                                        for b in res.witness.bands],
                              "nu_sq": res.witness.nu_sq}
    _emit(args, payload)
    return 0


def _cmd_circumcenter(args) -> int:
    pts = [_parse_point(p) for p in args.points]
    center = circumcenter(*pts)
    plane = plane_through(*pts)
    _emit(args, {"center": [_frac_str(c) for c in center],
                 "plane": {"i1": plane.i1, "i2": plane.i2,
                           "v0": [_frac_str(c) for c in plane.v0],
                           "v1": [_frac_str(c) for c in plane.v1],
                           "v2": [_frac_str(c) for c in plane.v2]}})
    return 0


def _cmd_circle_count(args) -> int:
    pts = [_parse_point(p) for p in args.points]
    trace = quadratic_counting.embedded_circle_count(*pts)
    nf = trace.norm_form
    _emit(args, {
        "count": len(trace.points),
        "points": [list(p) for p in trace.points],
        "conic": {"A": trace.conic.A, "B": trace.conic.B, "C": trace.conic.C,
                  "D": trace.conic.D, "E": trace.conic.E, "F": trace.conic.F},
        "P": nf.P, "Q": nf.Q, "K": nf.K,
        "center": [_frac_str(c) for c in trace.center],
        "radius_sq": trace.radius_sq,
        "plane": {"i1": trace.plane.i1, "i2": trace.plane.i2},
        "solutions": [list(s) for s in trace.solutions],
    })
    return 0


def _cmd_tetra(args) -> int:
    pts = [_parse_point(p) for p in args.points]
    vol = band3d.tetra_volume(*pts)
    print(_frac_str(vol))
    return 0


def _cmd_band3d_census(args) -> int:
    sh = shell_mod.enumerate_shell(3, args.m)
    H = Fraction(args.H)
    if args.axis2 is not None:
        b1 = band3d.Band3D(band3d.BandProfile3D(args.m, H), _parse_ratvec(args.axis))
        b2 = band3d.Band3D(band3d.BandProfile3D(args.m, Fraction(args.H2)),
                           _parse_ratvec(args.axis2))
        res = band3d.census_A23(sh, b1, b2, theta=args.theta)
        _emit(args, {"count": res.count, "members": [list(p) for p in res.members],
                     "alpha": res.alpha, "pole_distance": res.pole_distance,
                     "covering_sectors": res.covering_sectors,
                     "occupied_sectors": res.occupied_sectors, "theta": res.theta})
    else:
        res = band3d.census_A13(sh, H, axis=_parse_ratvec(args.axis), theta=args.theta,
                                offset=args.offset)
        _emit(args, {"count": res.count, "regime": res.regime, "R": res.R,
                     "theta": res.theta, "n_sectors": res.n_sectors,
                     "members": [list(p) for p in res.members],
                     "sectors": [{"index": s.index, "count": s.count,
                                  "hull_vol": s.hull_vol, "coplanar": s.points_coplanar}
                                 for s in res.sectors],
                     "cap_cover_estimate": res.cap_cover_estimate})
    return 0


def _cmd_sector_volume(args) -> int:
    vol = band3d.sector_hull_volume(args.m, Fraction(args.H), args.theta)
    print(mp.nstr(vol, 20))
    return 0


def _cmd_restrict(args) -> int:
    with open(args.eigenfunction) as fh:
        e = restriction.Eigenfunction.from_json(fh.read())
    base = _parse_ratvec(args.base) if args.base else None
    sub = restriction.GeodesicSubmanifold(frame=_parse_frame(args.frame), base=base)
    norm_sq = restriction.restriction_norm_sq(e, sub)
    _emit(args, {"norm_sq": norm_sq, "wedge_sq": sub.wedge_sq,
                 "baseline": sub.wedge_norm() * 2 ** sub.k})
    return 0


def _cmd_extremal(args) -> int:
    sh = shell_mod.enumerate_shell(args.d, args.m)
    if args.construct == "cap2d":
        cap = regions.max_cap_count(sh, Fraction(args.radius_sq) if args.radius_sq else None)
        rep = restriction.build_extremal_cap_2d(sh, cap.members)
    elif args.construct == "subsphere":
        rep = restriction.build_extremal_subsphere_cap(sh, args.k)
    else:
        config = regions.BandSearchConfig(
            directions=(_parse_frame(args.directions),) if args.directions else ("pairs", "points"),
            anchor_mode=args.anchor_mode)
        found = regions.max_band_intersection(sh, args.k, config)
        if found.witness is None:
            raise ValueError("band search found no witness")
        rep = restriction.build_extremal_band_intersection(sh, found.witness)
    _emit(args, {"count": rep.count, "norm_sq": rep.norm_sq, "baseline": rep.baseline,
                 "ratio": rep.ratio, "max_abs_phase": rep.max_abs_phase,
                 "bracket_holds": rep.bracket_holds(),
                 "frame": [[_frac_str(c) for c in u] for u in rep.submanifold.frame],
                 "support": [list(p) for p in rep.eigenfunction.support()]})
    return 0


def _cmd_hilbert_norm(args) -> int:
    val = restriction.hilbert_truncated_norm(args.mu, args.N, tol=args.tol)
    _emit(args, {"mu": args.mu, "N": args.N, "norm": val})
    return 0


def _cmd_verify(args) -> int:
    import subprocess

    target = args.tests if args.suite == "all" else os.path.join(args.tests, "test_acceptance.py")
    if not os.path.exists(target):
        print(json.dumps({"error": f"test path {target!r} not found"}), file=sys.stderr)
        return 1
    cmd = [sys.executable, "-m", "pytest", target, "-q", "-s"]
    proc = subprocess.run(cmd)
    return proc.returncode


def _cmd_report(args) -> int:
    from math import isqrt

    out = args.output
    if out is None:
        outdir = os.environ.get("CAPBANDS_OUTDIR", ".")
        out = os.path.join(outdir, f"report_d{args.d}.csv")
    rows = []
    if args.d == 2:
        table = shell_mod.shell_table(2, args.max_m)
        rows.append("m,r2,N1,A1_lower,extremal_ratio")
        for m in range(1, args.max_m + 1):
            pts = table[m]
            if not pts:
                continue
            sh = shell_mod.Shell(d=2, m=m, points=tuple(pts))
            cap = regions.max_cap_count(sh)
            dirs = [p for p in pts if any(p)] + [(1, 0), (0, 1)]
            a1, _ = regions.max_band_k1_integer(sh, dirs)
            try:
                rep = restriction.build_extremal_cap_2d(sh, cap.members)
                ratio = repr(rep.ratio)
            except ValueError:
                ratio = ""
            rows.append(f"{m},{len(pts)},{cap.count},{a1},{ratio}")
    elif args.d == 3:
        import math

        table = shell_mod.shell_table(3, args.max_m)
        table2 = shell_mod.shell_table(2, args.max_m)
        frame = band3d._azimuth_frame((0, 0, 1))
        rows.append("m,r3,equator_count,A13_axis_lower,max_sector_count,n_sectors,subsphere_ratio")
        for m in range(1, args.max_m + 1):
            pts = table[m]
            if not pts:
                continue
            # equatorial band members: integer membership along the z axis,
            # equivalent to Band3D(m, isqrt(m)-1, e3) but without surds
            s = isqrt(m)
            members = [p for p in pts
                       if p[2] + s >= 0 and (p[2] + s) ** 2 >= m
                       and (p[2] + s - 1 <= 0 or (p[2] + s - 1) ** 2 <= m)]
            zcount: dict[int, int] = {}
            for p in pts:
                zcount[p[2]] = zcount.get(p[2], 0) + 1
            a13 = max(zcount[z] + zcount.get(z + 1, 0) for z in zcount)
            lam = math.sqrt(m)
            theta = lam ** (-2.0 / 3.0)
            nsec = max(1, math.ceil(2 * math.pi / theta))
            buckets: dict[int, int] = {}
            for p in members:
                idx = band3d._sector_index(p, frame, nsec, 0.0)
                buckets[idx] = buckets.get(idx, 0) + 1
            max_sector = max(buckets.values()) if buckets else 0
            ratio = ""
            if table2[m]:
                sh = shell_mod.Shell(d=3, m=m, points=tuple(pts))
                try:
                    rep = restriction.build_extremal_subsphere_cap(sh, 2)
                    ratio = repr(rep.ratio)
                except ValueError:
                    ratio = ""
            rows.append(f"{m},{len(pts)},{len(members)},{a13},{max_sector},{nsec},{ratio}")
    else:
        raise ValueError("report supports d in {2, 3}")
    with open(out, "w") as fh:
        fh.write("\n".join(rows) + "\n")
    print(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capbands",
        description="Exact lattice-point counting in caps and bands on sphere "
                    "shells, restriction norms, and the 3D band censuses.")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized harnesses")
    parser.add_argument("--threads", type=int, default=1,
                        help="advisory parallelism hint; outputs never depend on it")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("enumerate", help="list all lattice points with |n|^2 = m")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("count-cap", help="exact count of shell points in a cap")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--center", required=True, help="rational vector, e.g. 7/2,7/2")
    p.add_argument("--radius-sq", dest="radius_sq", required=True, help="rational, e.g. 5")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_count_cap)

    p = sub.add_parser("count-band", help="exact count of shell points in a unit band")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--direction", required=True)
    p.add_argument("--anchor", required=True)
    p.add_argument("--width", default="1", help="full width, rational (default 1)")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_count_band)

    p = sub.add_parser("extremal-cap", help="maximize shell points in a cap with on-sphere center")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--radius-sq", dest="radius_sq", default=None)
    p.add_argument("--mode", choices=["exact", "points", "grid"], default="exact")
    p.add_argument("--grid-resolution", type=int, default=128)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_extremal_cap)

    p = sub.add_parser("extremal-bands", help="maximize shell points in k transverse unit bands")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--directions", help="semicolon-separated rational vectors")
    p.add_argument("--anchor-mode", choices=["sweep", "lattice"], default="sweep")
    p.add_argument("--width", default="1")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_extremal_bands)

    p = sub.add_parser("circumcenter", help="exact circumcenter and plane of three lattice points")
    p.add_argument("points", nargs=3, help="three points like 3,4,0")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_circumcenter)

    p = sub.add_parser("circle-count", help="lattice points on the circle through three points")
    p.add_argument("points", nargs=3)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_circle_count)

    p = sub.add_parser("tetra", help="exact tetrahedron volume of four integer points")
    p.add_argument("points", nargs=4)
    p.set_defaults(func=_cmd_tetra)

    p = sub.add_parser("band3d-census", help="exact band (or band-pair) census on a 3D shell")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--H", required=True, help="rational height parameter")
    p.add_argument("--axis", default="0,0,1")
    p.add_argument("--H2", default=None)
    p.add_argument("--axis2", default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--offset", type=float, default=0.0)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_band3d_census)

    p = sub.add_parser("sector-volume", help="closed-form band-sector hull volume")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--H", required=True)
    p.add_argument("--theta", required=True)
    p.set_defaults(func=_cmd_sector_volume)

    p = sub.add_parser("restrict", help="restriction norm^2 of an eigenfunction file on a frame")
    p.add_argument("--eigenfunction", required=True, help="JSON file")
    p.add_argument("--frame", required=True, help="semicolon-separated rational vectors")
    p.add_argument("--base", default=None)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_restrict)

    p = sub.add_parser("extremal", help="build and verify an extremal construction")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--construct", choices=["cap2d", "subsphere", "bands"], default="cap2d")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--radius-sq", dest="radius_sq", default=None)
    p.add_argument("--directions", default=None)
    p.add_argument("--anchor-mode", choices=["sweep", "lattice"], default="sweep")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_extremal)

    p = sub.add_parser("hilbert-norm", help="largest singular value of the truncated kernel")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_hilbert_norm)

    p = sub.add_parser("verify", help="run the acceptance suite (exit nonzero on failure)")
    p.add_argument("--suite", choices=["acceptance", "all"], default="acceptance")
    p.add_argument("--tests", default="tests", help="path to the test directory")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("report", help="CSV sweep of counts and extremal ratios over m")
    p.add_argument("--d", type=int, required=True, choices=[2, 3])
    p.add_argument("--max-m", dest="max_m", type=int, default=10000)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OverflowError, OSError) as exc:
        print(json.dumps({"error": str(exc), "verb": args.verb}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
