import json
from pathlib import Path

import pytest

from multicurve.cli import FALSIFIED, OK, UNDETERMINED, USAGE, ginf_main, main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fx(name):
    return str(FIXTURES / name)


def run(capsys, *argv, entry=main):
    code = entry(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_surface_build(capsys):
    code, out, _ = run(capsys, "surface-build", "--surface", fx("ladder4.json"), "--format", "json")
    assert code == OK
    data = json.loads(out)
    assert data["frontier"] == {"c-5": "left", "c4": "right"}
    code, out, _ = run(capsys, "surface-build", "--surface", "finite:2,0")
    assert code == OK and out.startswith("S_2,0: 2 pants, 3 curves")
    code, out, _ = run(capsys, "surface-build", "--surface", "lochness:3", "--dot")
    assert code == OK and out.startswith("graph")


def test_farey_path(capsys):
    code, out, _ = run(capsys, "farey-path", "inf", "1/2", "--format", "json")
    assert code == OK
    assert len(json.loads(out)["triangles"]) == 2


def test_g0_commands(capsys):
    code, out, _ = run(capsys, "g0-neighbors", "--decomposition", fx("excited_ladder4.json"), "--chart", "c0",
                       "--format", "json")
    assert code == OK
    slopes = {n["slope"] for n in json.loads(out)["neighbors"]}
    assert {"0/1", "1/1"} <= slopes
    code, out, _ = run(capsys, "g0-classify", fx("square_ladder6.json"))
    assert code == OK and out.startswith("infty-alternating-square")


def test_ginf_round_trip(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    code, out, _ = run(capsys, "ginf-path", "--surface", fx("ladder8.json"), "--metric", fx("uniform_metric.json"),
                       "--mu", fx("mu.json"), "--nu", fx("nu.json"), "--out", str(cert))
    assert code == OK and "path of length" in out
    code, out, _ = run(capsys, "verify", str(cert), entry=ginf_main)
    assert code == OK and out.startswith("VALID")
    data = json.loads(cert.read_text())
    data["L"] = 0.5
    cert.write_text(json.dumps(data))
    code, out, _ = run(capsys, "ginf-verify", str(cert))
    assert code == FALSIFIED and out.startswith("INVALID: L:")


def test_ginf_undetermined(capsys):
    code, _, err = run(capsys, "path", "--surface", "ladder:5", "--metric", fx("uniform_metric.json"),
                       "--mu", fx("nu.json"), "--nu", fx("mu.json"), "--full", entry=ginf_main)
    # c5 is the frontier of Ladder(5), so its excited chart is not decidable there
    assert code == UNDETERMINED
    assert "c5" in err


def test_ginf_insufficient_window(capsys, tmp_path):
    mu = tmp_path / "a.json"
    nu = tmp_path / "b.json"
    mu.write_text('{"curves": ["c0"]}')
    nu.write_text('{"curves": ["c0@0/1"]}')
    code, _, err = run(capsys, "ginf-path", "--surface", "ladder:5", "--metric", fx("uniform_metric.json"),
                       "--mu", str(mu), "--nu", str(nu))
    assert code == UNDETERMINED
    assert "try window 8" in err


def test_metric_bounds(capsys):
    code, out, _ = run(capsys, "metric-bounds", "--surface", fx("ladder8.json"), "--metric", fx("uniform_metric.json"),
                       "--pairs", "c0:c7,c0:c8")
    assert code == OK
    rows = out.strip().split("\n")
    assert rows[1].startswith("c0,c7,16.88")
    assert rows[2].endswith("UNDETERMINED")
    code, _, _ = run(capsys, "metric-bounds", "--surface", fx("ladder8.json"), "--metric", fx("uniform_metric.json"),
                     "--pairs", "c0:zz")
    assert code == USAGE


def test_lemma_suite(capsys):
    code, out, _ = run(capsys, "lemma-suite", "--surface", "finite:2,1", "--depth", "2", "--trials", "5")
    assert code == OK
    assert all(line.startswith("PASS") for line in out.strip().split("\n"))


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == USAGE
    with pytest.raises(SystemExit) as exc:
        main(["ginf-path", "--surface", "ladder:8"])
    assert exc.value.code == USAGE
    capsys.readouterr()
    code, _, err = run(capsys, "surface-build", "--surface", "klein:3")
    assert code == USAGE and "unknown surface kind" in err
    code, _, err = run(capsys, "surface-build", "--surface", '{"kind": "ladder"}')
    assert code == USAGE and "surface" in err
    code, _, _ = run(capsys, "ginf-verify", "/nonexistent.json")
    assert code == USAGE
