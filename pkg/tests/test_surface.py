import json

import pytest

from multicurve.errors import InvalidSurface, Undetermined
from multicurve.surface import (
    SurfaceSpec,
    build_surface,
    complexity,
    genus_zero_pants,
    level_system,
    sort_key,
    split_id,
    torus_curves,
)

FINITE = [(0, 4), (0, 5), (0, 7), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1), (3, 0), (3, 2)]


@pytest.mark.parametrize("g,b", FINITE)
def test_finite_counts(g, b):
    S = build_surface(SurfaceSpec.finite(g, b))
    assert len(S.pants) == 2 * g - 2 + b
    assert len(S.curves) == 3 * g - 3 + b
    assert not S.frontier


@pytest.mark.parametrize("g,b", FINITE)
def test_trivalent(g, b):
    S = build_surface(SurfaceSpec.finite(g, b))
    for p, cuffs in S.pants.items():
        assert len(cuffs) == 3
    # each curve is glued on two pants slots, each boundary on one
    slots = sum(1 for cuffs in S.pants.values() for c in cuffs if c in S.curves)
    assert slots == 2 * len(S.curves)
    assert len(S.legs) == b


def test_invalid_specs():
    with pytest.raises(InvalidSurface):
        SurfaceSpec.finite(0, 3)
    with pytest.raises(InvalidSurface):
        SurfaceSpec.finite(-1, 5)
    with pytest.raises(InvalidSurface):
        SurfaceSpec("ladder", window=0)
    with pytest.raises(InvalidSurface):
        SurfaceSpec("klein", window=3)
    assert complexity(1, 1) == 1
    assert complexity(2, 0) == 3


def test_memoized():
    a = build_surface(SurfaceSpec.ladder(3))
    b = build_surface({"kind": "ladder", "window": 3})
    assert a is b


def test_ladder_window():
    S = build_surface(SurfaceSpec.ladder(4))
    assert S.frontier == {"c-5", "c4"}
    assert S.frontier_groups == {"c-5": "left", "c4": "right"}
    assert sorted(torus_curves(S), key=sort_key) == [f"t{k}" for k in range(-4, 5)]
    for k in range(-4, 5):
        assert S.pants[f"H{k}"] == (f"a{k}", f"a{k}", f"t{k}")
        assert S.chart_kind(f"a{k}") == "S11"
    assert S.chart_kind("c0") == "S04"
    assert S.is_loop("a0")


def test_lochness_window():
    S = build_surface(SurfaceSpec.lochness(4))
    assert S.frontier == {"c4"}
    assert S.frontier_groups == {"c4": "end"}
    assert len(torus_curves(S)) == 6


def test_torus_curves_brute_force():
    # the handle-normal base of S_{2,0} has one curve cutting off a torus
    assert torus_curves(build_surface(SurfaceSpec.finite(2, 0))) == {"t0"}
    assert torus_curves(build_surface(SurfaceSpec.finite(0, 5))) == set()


def test_enlarged_spec():
    assert SurfaceSpec.ladder(4).enlarged(2) == SurfaceSpec.ladder(6)
    fin = SurfaceSpec.finite(2, 1)
    assert fin.enlarged(3) == fin


def test_json_round_trip():
    S = build_surface(SurfaceSpec.ladder(2))
    data = S.to_json()
    assert SurfaceSpec.from_json(data["surface"]) == S.spec
    assert json.loads(json.dumps(data)) == data
    assert set(data["pants"]) == set(S.pants)


def test_dot_export():
    dot = build_surface(SurfaceSpec.lochness(2)).to_dot()
    assert dot.startswith('graph "')
    assert '"C1" -- "C2" [label="c1"];' in dot
    assert "style=dashed" in dot


def test_ids():
    assert split_id("c-5") == ("c", -5)
    assert sort_key("c-5") < sort_key("c-4") < sort_key("c10")
    with pytest.raises(ValueError):
        split_id("bad")


def test_separators_and_dual_path():
    S = build_surface(SurfaceSpec.ladder(4))
    assert S.separators("c0", "c3") == ["c1", "c2"]
    path = S.dual_path("c0", "c2")
    assert [p for p, _, _ in path] == ["C1", "C2"]
    assert path[0][1] == "c0" and path[-1][2] == "c2"
    with pytest.raises(Undetermined):
        S.separators("c4", "c0")


def test_window_cap(monkeypatch):
    monkeypatch.setenv("MULTICURVE_WINDOW_MAX", "20")
    with pytest.raises(InvalidSurface):
        build_surface(SurfaceSpec.ladder(37))
    build_surface(SurfaceSpec.ladder(19))


def test_levels_ladder():
    S = build_surface(SurfaceSpec.ladder(4))
    ls = level_system(S)
    assert ls.gamma0 == "c0"
    assert ls.levels == [("c0",), ("c-1", "c1"), ("c-2", "c2"), ("c-3", "c3"), ("c-4",)]
    assert ls.complete == 4
    assert ls.level_of("c-2") == 2
    assert ls.descendants("c1", 3) == ("c3",)


def test_levels_lochness():
    S = build_surface(SurfaceSpec.lochness(4))
    ls = level_system(S)
    assert ls.counts == [1, 1, 1, 1]
    assert genus_zero_pants(S) == {"C0", "C1", "C2", "C3", "C4"}


def test_levels_custom_root():
    S = build_surface(SurfaceSpec.ladder(4))
    ls = level_system(S, gamma0="c2")
    assert ls.levels[0] == ("c2",)
    with pytest.raises(InvalidSurface):
        level_system(S, gamma0="t0")
