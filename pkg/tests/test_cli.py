import json
import math
import shutil
import subprocess
import sys

import numpy as np
import pytest

from conftest import P3, P4, p1
from polyzero import bounds_report, zero_atlas
from polyzero.cli import census_csv, fmt, run
from polyzero.polycore import read_poly, write_poly
from polyzero.render import read_ppm, render_phase


@pytest.fixture
def p3_file(tmp_path):
    path = tmp_path / "p3.poly"
    write_poly(P3, path)
    return path


@pytest.fixture
def p4_file(tmp_path):
    path = tmp_path / "p4.poly"
    write_poly(P4, path)
    return path


def kv(text):
    return dict(part.split("=", 1) for part in text.split())


def test_fmt_shortest_round_trip():
    assert fmt(3.0) == "3"
    assert fmt(1 + math.sqrt(2)) == "2.414213562373095"
    assert float(fmt(0.1 + 0.2)) == 0.1 + 0.2
    assert fmt(None) == "none"


def test_bounds_p3(p3_file, capsys):
    assert run(["bounds", str(p3_file)]) == 0
    out = kv(capsys.readouterr().out)
    assert out["r0"].startswith("2.41421356") and out["r1"] == "3" and out["r2"] == "3"
    rep = bounds_report(P3)
    assert float(out["r0"]) == rep.r0 and out["applicable"] == "true"


def test_bounds_inapplicable_is_domain_error(capsys):
    assert run(["bounds", "--poly", "n 2; 2 0 1; 0 2 1"]) == 1
    assert kv(capsys.readouterr().out)["applicable"] == "false"


def test_roots_p4(p4_file, capsys):
    assert run(["roots", str(p4_file), "--radius", "3"]) == 0
    captured = capsys.readouterr()
    assert captured.out == census_csv(zero_atlas(P4, 3.0))
    rows = captured.out.strip().splitlines()
    assert rows[0] == "re,im,index,jac_sign,residual"
    ims = sorted(float(r.split(",")[1]) for r in rows[1:])
    assert ims == pytest.approx([-math.sqrt(2), math.sqrt(2)], abs=1e-14)
    assert "certified=true" in captured.err


def test_roots_default_radius_and_seeds_file(tmp_path, p3_file, capsys):
    seeds = tmp_path / "seeds.csv"
    seeds.write_text("re,im\n0,0.9\n# comment\n-1.1,0\n")
    assert run(["--threads", "2", "roots", str(p3_file), "--seeds-file", str(seeds)]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 4


def test_extremal_n2(capsys):
    assert run(["extremal", "--n", "2"]) == 0
    out = capsys.readouterr().out
    rows = [r for r in out.splitlines() if r and not r.startswith("#")]
    assert rows[0] == "re,im,index,jac_sign,residual" and len(rows) == 5
    assert "max_relative_residual=" in out


def test_extremal_with_coeff_file(tmp_path, capsys):
    path = tmp_path / "a.txt"
    path.write_text("1\n1  # a_2\n0.1 0\n")
    assert run(["extremal", "--n", "3", "--coeffs", str(path)]) == 0
    assert "a_3=0.1,0" in capsys.readouterr().out


def test_analyze_text_and_json(capsys):
    assert run(["analyze", "--poly", "n 5; 5 0 1; 0 1 2"]) == 0
    out = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert out == {
        "balk": "True",
        "dominant_ell": "5",
        "existence": "True",
        "finiteness": "MonicInZ",
        "witness": "5,0",
        "max_zeros": "25",
    }
    assert run(["analyze", "--json", "--poly", "1 1 1; 0 0 -1"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["finiteness"] == "SelfConjugate" and rec["max_zeros"] is None


def test_analyze_require_finite(capsys):
    assert run(["analyze", "--require-finite", "--poly", "1 1 1; 0 0 -1"]) == 1
    assert "finiteness not established" in capsys.readouterr().err


def test_wind_and_annulus(p3_file, capsys):
    assert run(["wind", str(p3_file), "--radius", "3"]) == 0
    assert kv(capsys.readouterr().out)["wind"] == "2"
    assert run(["wind", str(p3_file), "--annulus", "0.5", "3"]) == 0
    assert capsys.readouterr().out.strip() == "wind=2"
    assert run(["wind", str(p3_file), "--radius", "0.5", "--center", "0", "1"]) == 0
    assert kv(capsys.readouterr().out)["wind"] == "1"


def test_wind_zero_on_curve_is_domain_error(p3_file, capsys):
    assert run(["wind", str(p3_file), "--radius", "1"]) == 1
    assert "error" in capsys.readouterr().err


def test_plot_matches_library(tmp_path, capsys):
    src = tmp_path / "p1.poly"
    write_poly(p1(), src)
    out = tmp_path / "p1.ppm"
    assert run(["plot", str(src), "--window", "-1.5", "1.5", "-1.5", "1.5", "--size", "40", "30", "-o", str(out)]) == 0
    want = render_phase(p1(), (-1.5, 1.5, -1.5, 1.5), 40, 30)
    assert np.array_equal(read_ppm(out), want.pixels)


def test_plot_with_marks_and_contraction(tmp_path, capsys):
    src = tmp_path / "p1.poly"
    write_poly(p1(), src)
    marks = tmp_path / "c.csv"
    assert run(["roots", str(src), "--radius", "2", "-o", str(marks)]) == 0
    out = tmp_path / "c.ppm"
    args = ["plot", str(src), "--window", "-1", "1", "-1", "1", "--size", "50", "50", "--contract"]
    assert run(args + ["--marks", str(marks), "-o", str(out)]) == 0
    assert read_ppm(out).shape == (50, 50, 3)


def test_construct_round_trips(tmp_path, capsys):
    out = tmp_path / "k.poly"
    assert run(["construct", "--n", "3", "--k", "2", "-o", str(out)]) == 0
    census = zero_atlas(read_poly(out), 2.0)
    assert len(census) == 2
    assert run(["construct", "--n", "2", "--k", "inf"]) == 0
    assert "0 2 -1.0 0.0" in capsys.readouterr().out
    assert run(["construct", "--n", "3", "--k", "5"]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["bounds"],
        ["frobnicate"],
        ["roots", "--poly", "n 2; 3 0 1"],
        ["bounds", "/nonexistent/p.poly"],
        ["wind", "--poly", "1 0 1"],
        ["--threads", "0", "bounds", "--poly", "1 0 1"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv) == 2


def test_malformed_file_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.poly"
    bad.write_text("n 2\n1 0 1\n2 0 oops\n")
    assert run(["bounds", str(bad)]) == 2
    assert "line 3" in capsys.readouterr().err


@pytest.mark.skipif(shutil.which("polyzero") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(
        ["polyzero", "bounds", "--poly", "n 2; 2 0 1; 1 0 1; 0 1 1; 0 0 2"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert kv(proc.stdout)["r1"] == "4"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "polyzero.cli", "construct", "--n", "1", "--k", "1"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.startswith("#")
