import random

import pytest

from multicurve.decomposition import PantsDecomposition
from multicurve.g0lab import OTHER, classify_loop
from multicurve.lemmas import check_farey, check_p_mu, lemma_suite, perturbed_square
from multicurve.surface import SurfaceSpec, build_surface


@pytest.mark.parametrize("spec", [SurfaceSpec.ladder(5), SurfaceSpec.lochness(5), SurfaceSpec.finite(2, 2)])
def test_suite_passes(spec):
    results = lemma_suite(build_surface(spec), depth=2, seed=1, trials=10)
    for r in results:
        assert r.passed, (r.name, r.failures)
        assert r.checked > 0
    names = {r.name for r in results}
    assert ("squares" in names) == spec.is_infinite


def test_single_checkers():
    assert check_farey(bound=5).passed
    X = PantsDecomposition.base(build_surface(SurfaceSpec.ladder(3)))
    r = check_p_mu(X, depth=2, bound=3, limit=2)
    assert r.passed and r.checked == 2
    assert r.to_json()["name"] == "p_mu_farey"


def test_perturbed_squares_are_rejected():
    surf = build_surface(SurfaceSpec.ladder(6))
    rng = random.Random(0)
    seen = 0
    for _ in range(200):
        loop = perturbed_square(PantsDecomposition.base(surf), rng)
        if loop:
            seen += 1
            assert classify_loop(loop).kind == OTHER
    assert seen > 10
