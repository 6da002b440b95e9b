import copy
import json

import pytest

from multicurve.certificate import verify_certificate
from multicurve.diameter import GInfVertex, diameter_path
from multicurve.metric import FNMetric
from multicurve.surface import SurfaceSpec, build_surface


@pytest.fixture(scope="module")
def m():
    return FNMetric.uniform(1.0, 3.0)


@pytest.fixture(scope="module")
def full_cert(m):
    S = build_surface(SurfaceSpec.ladder(8))
    mu = GInfVertex.from_curves(S, m, ["c0", "c3"])
    nu = GInfVertex.from_curves(S, m, ["c0@0/1"])
    return diameter_path(mu, nu, m).to_json()


@pytest.fixture(scope="module")
def edge_cert(m):
    S = build_surface(SurfaceSpec.lochness(8))
    mu = GInfVertex.from_curves(S, m, ["c0", "c3"])
    nu = GInfVertex.from_curves(S, m, ["c3", "a0@0/1"])
    return diameter_path(mu, nu, m).to_json()


def tampered(cert, change):
    c = copy.deepcopy(cert)
    change(c)
    return verify_certificate(c)


def test_valid_certificates(full_cert, edge_cert):
    assert verify_certificate(full_cert) == (True, "ok")
    assert verify_certificate(edge_cert) == (True, "ok")
    # survives a JSON round trip
    assert verify_certificate(json.loads(json.dumps(full_cert)))[0]


TAMPERS = [
    ("lower L", lambda c: c.update(L=1.0), "L"),
    ("raise L", lambda c: c.update(L=40.0), "(3)"),
    ("short length", lambda c: c["path"][1]["records"][0].update(length_upper=0.1), "L"),
    ("drop level member", lambda c: c["levels"]["curves"]["7"].pop(), "levels"),
    ("level past frontier", lambda c: c["levels"].update(selected=[0, 9]), "levels"),
    ("shrink support", lambda c: c["supports"]["v"]["c0"].remove("C0"), "support"),
    ("format", lambda c: c.update(format="ginf-path/0"), "format"),
    ("metric bound", lambda c: c["metric"].update(M=0.5), "metric"),
    ("share middle record", lambda c: c["path"][2]["records"].append(c["path"][1]["records"][0]), "half"),
    ("wrong kind", lambda c: c.update(kind="edge"), "path"),
    ("wrong window", lambda c: c["path"][1]["records"][0].update(window=["C5"]), "path[1]"),
    ("unknown tail", lambda c: c["path"][1].update(tail_complexity=None), "complement"),
]


@pytest.mark.parametrize("name,change,clause", TAMPERS, ids=[t[0] for t in TAMPERS])
def test_full_tampers(full_cert, name, change, clause):
    ok, reason = tampered(full_cert, change)
    assert not ok
    assert reason.startswith(clause + ":"), reason


def test_edge_tampers(edge_cert):
    ok, reason = tampered(edge_cert, lambda c: c.update(L=0.5))
    assert not ok and reason.startswith("L:")
    # replace the second endpoint with one meeting the first
    def clash(c):
        c["path"][1]["records"] = [
            {"curve": "c0@0/1", "window": ["C0", "C1"], "crossings": ["c0"], "length_upper": 20.0}
        ]
        c["L"] = 20.0
    ok, reason = tampered(edge_cert, clash)
    assert not ok and reason.startswith("edge:"), reason
    ok, reason = tampered(edge_cert, lambda c: c["path"].pop())
    assert not ok and reason.startswith("path:")


def test_garbage_is_rejected():
    ok, reason = verify_certificate({"format": "ginf-path/1"})
    assert not ok
    assert verify_certificate([]) == (False, "format: certificate is not a JSON object")
    ok, reason = verify_certificate({"format": "ginf-path/1", "kind": "trivial", "path": "x"})
    assert not ok and reason.startswith("format")
