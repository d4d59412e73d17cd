import json
import subprocess
import sys

import pytest

from capbands.cli import main
from capbands.shell import Shell
from capbands.restriction import Eigenfunction
from capbands.shell import enumerate_shell


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enumerate_round_trips(capsys):
    code, out, _ = run_cli(["enumerate", "--d", "2", "--m", "25"], capsys)
    assert code == 0
    sh = Shell.from_json(out)
    assert sh == enumerate_shell(2, 25)
    assert json.loads(out)["count"] == 12


def test_count_cap(capsys):
    code, out, _ = run_cli(["count-cap", "--d", "2", "--m", "25",
                            "--center", "7/2,7/2", "--radius-sq", "5"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["count"] == 2
    assert sorted(map(tuple, obj["members"])) == [(3, 4), (4, 3)]


def test_count_band(capsys):
    code, out, _ = run_cli(["count-band", "--d", "2", "--m", "25",
                            "--direction", "1,1", "--anchor", "3,4"], capsys)
    assert json.loads(out)["count"] == 2


def test_extremal_cap(capsys):
    code, out, _ = run_cli(["extremal-cap", "--d", "2", "--m", "25",
                            "--radius-sq", "5"], capsys)
    assert json.loads(out)["count"] == 2


def test_extremal_bands(capsys):
    code, out, _ = run_cli(["extremal-bands", "--d", "3", "--m", "2", "--k", "2",
                            "--directions", "1,0,0;0,1,0",
                            "--anchor-mode", "lattice"], capsys)
    obj = json.loads(out)
    assert obj["count"] == 2
    assert obj["witness"]["nu_sq"] == "1/4"


def test_circumcenter(capsys):
    code, out, _ = run_cli(["circumcenter", "1,0,0", "0,1,0", "0,0,1"], capsys)
    assert json.loads(out)["center"] == ["1/3", "1/3", "1/3"]


def test_circle_count(capsys):
    code, out, _ = run_cli(["circle-count", "3,4,0", "4,3,0", "5,0,0"], capsys)
    obj = json.loads(out)
    assert obj["count"] == 12
    assert obj["P"] >= 1 and obj["Q"] >= 1
    assert obj["conic"]["A"] * obj["conic"]["B"] - obj["conic"]["C"] ** 2 \
        == obj["P"] * obj["Q"] ** 2


def test_circle_count_collinear_fails(capsys):
    code, out, err = run_cli(["circle-count", "0,0", "1,1", "2,2"], capsys)
    assert code == 1
    assert "collinear" in json.loads(err)["error"]


def test_tetra(capsys):
    code, out, _ = run_cli(["tetra", "0,0,0", "1,0,0", "0,1,0", "0,0,1"], capsys)
    assert out.strip() == "1/6"


def test_band3d_census(capsys):
    code, out, _ = run_cli(["band3d-census", "--m", "25", "--H", "4"], capsys)
    obj = json.loads(out)
    assert obj["count"] == 12 and obj["regime"] == 3


def test_band3d_census_pair(capsys):
    code, out, _ = run_cli(["band3d-census", "--m", "25", "--H", "4",
                            "--axis2", "1,0,0", "--H2", "3/2"], capsys)
    obj = json.loads(out)
    assert obj["count"] == 2


def test_sector_volume(capsys):
    code, out, _ = run_cli(["sector-volume", "--m", "100", "--H", "5",
                            "--theta", "0.5"], capsys)
    assert code == 0
    float(out.strip())


def test_restrict_eigenfunction_file(tmp_path, capsys):
    sh = enumerate_shell(2, 25)
    e = Eigenfunction.uniform(sh, [(3, 4), (4, 3)])
    path = tmp_path / "e.json"
    path.write_text(e.to_json())
    code, out, _ = run_cli(["restrict", "--eigenfunction", str(path),
                            "--frame", "1,1"], capsys)
    obj = json.loads(out)
    assert abs(obj["norm_sq"] - 4 * 2 ** 0.5) < 1e-9


def test_extremal_verb(capsys):
    code, out, _ = run_cli(["extremal", "--d", "2", "--m", "25",
                            "--construct", "cap2d"], capsys)
    obj = json.loads(out)
    assert obj["bracket_holds"] is True
    assert abs(obj["ratio"] - obj["count"]) < 1e-6


def test_hilbert_norm_verb(capsys):
    code, out, _ = run_cli(["hilbert-norm", "--mu", "0.5", "--N", "32"], capsys)
    obj = json.loads(out)
    assert 0 < obj["norm"] < 3.3


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, _, _ = run_cli(["enumerate", "--d", "2", "--m", "25",
                          "--output", str(target)], capsys)
    assert code == 0
    assert json.loads(target.read_text())["count"] == 12


def test_report_small_and_deterministic(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    for target in (a, b):
        code, _, _ = run_cli(["report", "--d", "2", "--max-m", "60",
                              "--output", str(target)], capsys)
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().strip().split("\n")
    assert lines[0] == "m,r2,N1,A1_lower,extremal_ratio"
    rows = {int(line.split(",")[0]): line.split(",") for line in lines[1:]}
    assert rows[25][1] == "12" and rows[25][2] == "2"
    assert 3 not in rows  # empty shells are skipped


def test_report_d3_small(tmp_path, capsys):
    target = tmp_path / "d3.csv"
    code, _, _ = run_cli(["report", "--d", "3", "--max-m", "30",
                          "--output", str(target)], capsys)
    assert code == 0
    lines = target.read_text().strip().split("\n")
    rows = {int(line.split(",")[0]): line.split(",") for line in lines[1:]}
    assert rows[25][1] == "30"
    assert 7 not in rows


def test_verify_missing_path_fails(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, err = run_cli(["verify", "--tests", "no_such_dir"], capsys)
    assert code == 1


def test_usage_error_exit_code():
    proc = subprocess.run([sys.executable, "-m", "capbands.cli", "bogus-verb"],
                          capture_output=True)
    assert proc.returncode == 2
