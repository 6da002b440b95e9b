"""Acceptance criteria 1-10.

Each test prints one ``CRITERION n: PASS|FAIL`` line (visible even under
pytest's output capture) and then asserts.
"""

import math
import random
from itertools import combinations

import mpmath
import networkx as nx

from multicurve.certificate import verify_certificate
from multicurve.decomposition import (
    Curve,
    PantsDecomposition,
    apply_move,
    chart_of,
    classify_pair,
    decompose_mixed_move,
    random_decomposition,
)
from multicurve.diameter import diameter_path, lift, random_vertex
from multicurve.errors import SisterConflict
from multicurve.farey import INF, adjacent_slopes, all_slopes, farey_ball, farey_neighbors, is_farey_edge, triangle_path
from multicurve.g0lab import (
    INFTY_SQUARE,
    OTHER,
    Loop,
    build_infty_alt_square,
    classify_loop,
    consecutive_intersection_check,
    farey_graphs_intersection,
    is_one_triangle,
    p_mu_ball,
    slot_counts,
)
from multicurve.lemmas import perturbed_square, random_mixed_moves, random_square
from multicurve.metric import FNMetric, collar_width, cuff_distance, dist_lower, dist_upper
from multicurve.serialize import dumps, loads
from multicurve.surface import SurfaceSpec, build_surface


def report(capsys, n, ok, detail=""):
    with capsys.disabled():
        print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


# shared oracles


def oracle_relation(X, a, b):
    """Sister / contiguous / far straight from the pants list of ``X``."""
    pants = [set(x for x in cuffs if isinstance(x, Curve)) for cuffs in X.pants]
    pa = [i for i, p in enumerate(pants) if a in p]
    pb = [i for i, p in enumerate(pants) if b in p]
    if set(pa) & set(pb):
        return "sister"
    if any(pants[i] & pants[j] for i in pa for j in pb):
        return "contiguous"
    return "far"


def oracle_disjoint(surf, x, y):
    if x.chart == y.chart:
        return x == y
    if x.is_base or y.is_base:
        return True
    return y.chart not in surf.base_sisters(x.chart)


# 1


def test_criterion_1_farey_oracle(capsys):
    bound = 30
    slopes = list(all_slopes(bound))
    bad = []
    for a in slopes:
        for b in slopes:
            if (abs(a.p * b.q - a.q * b.p) == 1) != is_farey_edge(a, b):
                bad.append((a, b))
    # every edge of the ball sits in exactly two triangles
    edges = {frozenset((a, b)) for a in slopes for b in slopes if abs(a.p * b.q - a.q * b.p) == 1}
    big = set(all_slopes(2 * bound))
    for e in edges:
        a, b = tuple(e)
        third = [c for c in big if c not in e and is_farey_edge(a, c) and is_farey_edge(b, c)]
        if sorted(third) != list(farey_neighbors(a, b)) or len(third) != 2:
            bad.append(("triangles", a, b))
    rng = random.Random(1)
    for _ in range(200):
        a, b = rng.sample(slopes, 2)
        chain = triangle_path(a, b)
        ok = a in chain[0] and b in chain[-1]
        ok &= all(len(s & t) == 2 for s, t in zip(chain, chain[1:]))
        ok &= all(all(is_farey_edge(u, v) for u, v in combinations(t, 2)) for t in chain)
        if not ok:
            bad.append(("chain", a, b))
    report(capsys, 1, not bad, f"{len(edges)} edges, 200 chains, {len(bad)} mismatches")


# 2


def _p_mu_isomorphic(ch, depth=4, bound=5):
    adj, slope_of = p_mu_ball(ch, ch.slope, depth, bound)
    fb = farey_ball(ch.slope, depth, bound)
    G = nx.Graph([(x, y) for x, ys in adj.items() for y in ys])
    F = nx.Graph([(x, y) for x, ys in fb.items() for y in ys])
    G.add_nodes_from(adj)
    F.add_nodes_from(fb)
    mapped = nx.relabel_nodes(G, slope_of)
    ok = set(mapped.nodes) == set(F.nodes) and set(map(frozenset, mapped.edges)) == set(map(frozenset, F.edges))
    if ok and len(F) <= 60:
        ok = nx.is_isomorphic(G, F)
    return ok, {str(slope_of[x]) for x in adj}


def criterion_2_charts(extra=0):
    out = []
    for spec, limit in ((SurfaceSpec.finite(0, 4), 1), (SurfaceSpec.finite(1, 1), 1), (SurfaceSpec.finite(0, 5), 2), (SurfaceSpec.ladder(4 + extra), 6)):
        X = PantsDecomposition.base(build_surface(spec))
        names = ["c0", "t0", "a0", "c1", "t1", "a1"] if spec.is_infinite else X.surface.interior_curves
        for c in names[:limit]:
            out.append((spec, chart_of(X, c)))
    return out


def test_criterion_2_p_mu_is_farey(capsys):
    charts = criterion_2_charts()
    results = [_p_mu_isomorphic(ch)[0] for _, ch in charts]
    report(capsys, 2, len(charts) == 10 and all(results), f"{sum(results)}/{len(charts)} charts isomorphic")


# 3


def test_criterion_3_one_triangles(capsys):
    checked = positives = negatives = 0
    bad = []
    # sisters on S_0,5; far and contiguous charts on the others
    for spec, charts in ((SurfaceSpec.finite(0, 5), ("c0", "c1")), (SurfaceSpec.finite(0, 7), ("c0", "c2", "c3")), (SurfaceSpec.ladder(4), ("c0", "t0", "c2", "a-3"))):
        X = PantsDecomposition.base(build_surface(spec))
        kappa = len(X.curves)
        verts = set()
        for c in charts:
            adj, _ = p_mu_ball(chart_of(X, c), INF, 3, 3)
            verts |= set(adj)
        verts = sorted(verts, key=lambda v: v.key)
        from multicurve.decomposition import edge_label

        for a, b, c in combinations(verts, 3):
            labels = (edge_label(a, b), edge_label(b, c), edge_label(c, a))
            if None in labels:
                continue
            checked += 1
            common = a.curves & b.curves & c.curves
            extra = [v.curves - common for v in (a, b, c)]
            witness = len(common) == kappa - 1 and all(len(e) == 1 for e in extra)
            if witness:
                (x,), (y,), (z,) = extra
                witness = x.chart == y.chart == z.chart and all(
                    is_farey_edge(s, t) for s, t in combinations((x.slope, y.slope, z.slope), 2)
                )
            got, mu = is_one_triangle(Loop((a, b, c), labels))
            positives += got
            negatives += not got
            if got != witness or (got and mu != common):
                bad.append((a, b, c))
    ok = positives > 0 and negatives > 0 and not bad
    report(capsys, 3, ok, f"{checked} 3-loops, {positives} 1-triangles, {negatives} others, {len(bad)} mismatches")


# 4


def test_criterion_4_intersections(capsys):
    rng = random.Random(4)
    surfs = [build_surface(s) for s in (SurfaceSpec.finite(0, 5), SurfaceSpec.finite(2, 1), SurfaceSpec.ladder(4))]
    bad = []
    n = ones = 0
    while n < 500:
        surf = rng.choice(surfs)
        X = random_decomposition(surf, rng)
        charts = [c for c in surf.interior_curves if _chartable(X, c)]
        r = rng.random()
        if r < 0.6:
            e = rng.choice(charts)
            Y = apply_move(X, e, rng.choice(adjacent_slopes(X.value(e), 3)))
        elif r < 0.8:
            Y = X
        else:
            Y = random_decomposition(surf, rng)
        ychart = [c for c in surf.interior_curves if _chartable(Y, c)]
        cx, cy = chart_of(X, rng.choice(charts)), chart_of(Y, rng.choice(ychart))
        if cx.mu == cy.mu:
            continue
        n += 1
        got = farey_graphs_intersection(cx, cy)
        bx, _ = p_mu_ball(cx, cx.slope, 2, 4)
        by, _ = p_mu_ball(cy, cy.slope, 2, 4)
        brute = set(bx) & set(by)
        union = cx.mu | cy.mu
        is_pd = len(union) == len(X.curves) and all(oracle_disjoint(surf, a, b) for a, b in combinations(union, 2))
        ones += len(got) == 1
        if len(got) > 1 or (len(got) == 1) != is_pd or (brute and brute != got) or (is_pd and got != {_vertex_of(surf, union)}):
            bad.append((cx.id, cy.id))
    report(capsys, 4, not bad and 0 < ones < 500, f"500 pairs, {ones} meet in one vertex, {len(bad)} mismatches")


def _chartable(X, c):
    try:
        chart_of(X, c)
        return True
    except SisterConflict:
        return False


def _vertex_of(surf, curves):
    return PantsDecomposition(surf, {c.chart: c.slope for c in curves if not c.is_base})


# 5


def test_criterion_5_classification_invariance(capsys):
    rng = random.Random(5)
    surfs = [build_surface(s) for s in (SurfaceSpec.finite(0, 6), SurfaceSpec.finite(2, 1), SurfaceSpec.ladder(4), SurfaceSpec.lochness(4))]
    bad = []
    pairs = 0
    for _ in range(500):
        surf = rng.choice(surfs)
        X = random_decomposition(surf, rng)
        c = rng.choice([c for c in surf.interior_curves if _chartable(X, c)])
        Y = apply_move(X, c, rng.choice(adjacent_slopes(X.value(c), 3)))
        alpha, beta = X.curve_at(c), Y.curve_at(c)
        for g in X.curves & Y.curves:
            pairs += 1
            r1, r2 = classify_pair(X, g, alpha), classify_pair(Y, g, beta)
            if r1 != r2 or r1 != oracle_relation(X, g, alpha) or r2 != oracle_relation(Y, g, beta):
                bad.append((str(g), c))
    report(capsys, 5, not bad, f"500 edges, {pairs} curve pairs, {len(bad)} mismatches")


# 6


def oracle_square(loop):
    from multicurve.decomposition import edge_label

    v = loop.vertices
    labels = [edge_label(v[i], v[(i + 1) % 4]) for i in range(4)]
    pattern = labels in (["1", "inf", "1", "inf"], ["inf", "1", "inf", "1"])
    diagonals = edge_label(v[0], v[2]) != "inf" and edge_label(v[1], v[3]) != "inf"
    return pattern and diagonals


def build_squares(surf, rng, count):
    out = []
    while len(out) < count:
        X = random_decomposition(surf, rng, excite=0.15)
        got = random_square(X, rng)
        if got:
            alpha, moves, loop = got
            out.append((X.overrides, alpha, str(loop.vertices[0].value(alpha)), moves, loop))
    return out


def square_outcome(surf, overrides, alpha, slope, moves):
    X = PantsDecomposition(surf, overrides)
    loop = build_infty_alt_square(X, alpha, slope, moves)
    cls = classify_loop(loop)
    return cls.kind, consecutive_intersection_check(loop), slot_counts(X, alpha), cls.deficiency


def test_criterion_6_squares(capsys):
    rng = random.Random(6)
    surf = build_surface(SurfaceSpec.ladder(6))
    bad = []
    for overrides, alpha, slope, moves, loop in build_squares(surf, rng, 100):
        kind, cons, (m, n), _ = square_outcome(surf, overrides, alpha, slope, moves)
        if kind != INFTY_SQUARE or not cons or not oracle_square(loop) or not (1 <= m <= 4 and 1 <= n <= 8):
            bad.append(alpha)
    perturbed = 0
    while perturbed < 100:
        loop = perturbed_square(random_decomposition(surf, rng, excite=0.15), rng)
        if loop is None:
            continue
        perturbed += 1
        if classify_loop(loop).kind != OTHER or oracle_square(loop):
            bad.append("perturbed")
    report(capsys, 6, not bad, f"100 squares, 100 perturbed, {len(bad)} failures")


# 7


def test_criterion_7_mixed_moves(capsys):
    rng = random.Random(7)
    surfs = [build_surface(s) for s in (SurfaceSpec.finite(0, 8), SurfaceSpec.finite(3, 2), SurfaceSpec.ladder(5))]
    bad = []
    multi = 0
    for _ in range(100):
        surf = rng.choice(surfs)
        X = random_decomposition(surf, rng, excite=0.2)
        moves = random_mixed_moves(X, rng, rng.randint(2, 7))
        G = nx.Graph()
        G.add_nodes_from(moves)
        G.add_edges_from((c, d) for c, d in combinations(moves, 2) if oracle_relation(X, X.curve_at(c), X.curve_at(d)) == "contiguous")
        if any(oracle_relation(X, X.curve_at(c), X.curve_at(d)) == "sister" for c, d in combinations(moves, 2)):
            bad.append("sister move drawn")
            continue
        delta = max((d for _, d in G.degree), default=0)
        steps = decompose_mixed_move(X, moves)
        multi += len(steps) > 1
        Y = X
        for step in steps:
            for c, d in combinations(step, 2):
                if oracle_relation(Y, Y.curve_at(c), Y.curve_at(d)) != "far":
                    bad.append("step not far")
            Y = Y.with_values(step)
        if len(steps) > delta + 1 or Y != X.with_values(moves):
            bad.append(f"{len(steps)} steps, degree {delta}")
    report(capsys, 7, not bad and multi > 0, f"100 maps, {multi} needing several steps, {len(bad)} failures")


# 8


def _hexagon_oracle(l1, l2, l3):
    """Seam lengths of the right-angled hexagon, found by closing a turtle walk."""
    mp = mpmath.mp
    mp.dps = 40
    h = [mpmath.mpf(x) / 2 for x in (l1, l2, l3)]
    quarter = mpmath.matrix([[mpmath.cos(mp.pi / 4), -mpmath.sin(mp.pi / 4)], [mpmath.sin(mp.pi / 4), mpmath.cos(mp.pi / 4)]])

    def step(t):
        return mpmath.matrix([[mpmath.e ** (t / 2), 0], [0, mpmath.e ** (-t / 2)]]) * quarter

    def closure(x, y, z):
        M = step(h[0]) * step(x) * step(h[1]) * step(y) * step(h[2]) * step(z)
        return [M[0, 1], M[1, 0], M[0, 0] - M[1, 1]]

    return mpmath.findroot(closure, (mpmath.mpf(1), mpmath.mpf(1), mpmath.mpf(1)))


def test_criterion_8_metric(capsys):
    rng = random.Random(8)
    worst_collar = 0.0
    for _ in range(1000):
        l = rng.uniform(1e-3, 20)
        worst_collar = max(worst_collar, abs(math.sinh(collar_width(l)) * math.sinh(l / 2) - 1))
    bad_pairs = 0
    surfs = [build_surface(s) for s in (SurfaceSpec.finite(2, 2), SurfaceSpec.ladder(5), SurfaceSpec.lochness(5))]
    for _ in range(1000):
        surf = rng.choice(surfs)
        M = 3.0
        m = FNMetric(M, lengths={c: rng.uniform(0.05, M) for c in list(surf.curves) + list(surf.legs)}, periodic={"a": 1.0, "t": 1.0, "c": 1.0})
        a, b = rng.sample(surf.interior_curves, 2)
        if dist_lower(surf, m, a, b) > dist_upper(surf, m, a, b) + 1e-9:
            bad_pairs += 1
    worst_cuff = 0.0
    for _ in range(60):
        ls = [rng.uniform(0.3, 4.0) for _ in range(3)]
        x, y, z = _hexagon_oracle(*ls)
        ours = (cuff_distance(*ls, 0, 1), cuff_distance(*ls, 1, 2), cuff_distance(*ls, 2, 0))
        worst_cuff = max(worst_cuff, *(abs(float(o) - u) for o, u in zip((x, y, z), ours)))
    ok = worst_collar < 1e-12 and bad_pairs == 0 and worst_cuff < 1e-9
    report(capsys, 8, ok, f"collar err {worst_collar:.1e}, {bad_pairs} bad pairs, cuff err {worst_cuff:.1e}")


# 9


def _disjoint_support_holds(cert, m):
    sel = cert.selection
    surf = cert.surface
    levels = sel.levels
    for a, b in zip(sel.selected, sel.selected[1:]):
        for g in levels.levels[a]:
            for g2 in levels.levels[b]:
                if dist_lower(surf, m, g, g2) > cert.L + 1e-9:
                    for x in ("v", "w"):
                        for y in ("v", "w"):
                            if cert.supports[x][g].pants & cert.supports[y][g2].pants:
                                return False
    return True


def run_criterion_9(window, seed=9, pairs=50):
    m = FNMetric.uniform(1.0, 3.0)
    out = {}
    for spec in (SurfaceSpec.ladder(window), SurfaceSpec.lochness(window)):
        surf = build_surface(spec)
        rng = random.Random(seed)
        runs = []
        for _ in range(pairs):
            mu, nu = random_vertex(surf, m, rng), random_vertex(surf, m, rng)
            runs.append((mu, nu))
        out[spec.kind] = runs
    return m, out


def check_run(mu, nu, m):
    cert = diameter_path(mu, nu, m, full=True)
    doc = loads(dumps(cert.to_json()))
    ok, reason = verify_certificate(doc)
    return cert, ok and cert.length <= 3 and _disjoint_support_holds(cert, m), reason


def test_criterion_9_diameter(capsys):
    m, runs = run_criterion_9(8)
    bad = []
    count = 0
    for kind, pairs in runs.items():
        for mu, nu in pairs:
            count += 1
            _, ok, reason = check_run(mu, nu, m)
            if not ok:
                bad.append((kind, reason))
            short = diameter_path(mu, nu, m)
            if short.length > 3 or not verify_certificate(loads(dumps(short.to_json())))[0]:
                bad.append((kind, "short path"))
    report(capsys, 9, not bad and count == 100, f"{count} pairs on Ladder(8) and LochNess(8), {len(bad)} failures")


# 10


def _shared(curves, old):
    return sorted(str(c) for c in curves if c.chart in old.interior_curves)


def test_criterion_10_window_monotonicity(capsys):
    bad = []
    # criterion 2 on Ladder(6) instead of Ladder(4)
    for (s1, c1), (s2, c2) in zip(criterion_2_charts(0), criterion_2_charts(2)):
        r1, r2 = _p_mu_isomorphic(c1), _p_mu_isomorphic(c2)
        if r1 != r2:
            bad.append(("p_mu", c1.id))
    # criterion 6 on Ladder(8)
    rng = random.Random(6)
    small, big = build_surface(SurfaceSpec.ladder(6)), build_surface(SurfaceSpec.ladder(8))
    for overrides, alpha, slope, moves, _ in build_squares(small, rng, 100):
        a = square_outcome(small, overrides, alpha, slope, moves)
        b = square_outcome(big, overrides, alpha, slope, moves)
        if a[:3] != b[:3]:
            bad.append(("square", alpha))
    # criterion 9 on windows 10
    m, runs = run_criterion_9(8)
    for kind, pairs in runs.items():
        bigger = build_surface(SurfaceSpec(kind, window=10))
        for mu, nu in pairs:
            c1, ok1, _ = check_run(mu, nu, m)
            c2, ok2, _ = check_run(lift(mu, bigger, m), lift(nu, bigger, m), m)
            same = (
                ok1 == ok2
                and c1.length == c2.length
                and c1.selection.selected == c2.selection.selected
                and all(_shared(x.curves, mu.surface) == _shared(y.curves, mu.surface) for x, y in zip(c1.path[1:3], c2.path[1:3]))
            )
            if not same:
                bad.append((kind, "path"))
    report(capsys, 10, not bad, f"{len(bad)} answers changed")
