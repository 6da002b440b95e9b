"""Checkers for the structural lemmas about G0, run at desk scale.

Each checker returns a :class:`LemmaResult`; ``passed`` is ``None`` when the
window was too small to decide.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .decomposition import (
    FAR,
    PantsDecomposition,
    apply_infty_move,
    apply_move,
    chart_of,
    classify_pair,
    completion,
    contiguity_degree,
    decompose_mixed_move,
    diff_charts,
    edge_label,
    random_decomposition,
)
from .errors import MulticurveError, NotASquare, SisterConflict, Undetermined
from .farey import adjacent_slopes, all_slopes, farey_ball, farey_neighbors, is_farey_edge, triangle_path
from .g0lab import (
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
from .surface import Surface

SLOPES = ("0/1", "1/1", "-1/1", "1/2", "2/1")


@dataclass
class LemmaResult:
    name: str
    passed: bool | None
    checked: int = 0
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked, "failures": self.failures[:5]}


def _result(name, checked, failures):
    return LemmaResult(name, not failures, checked, failures)


def check_farey(bound: int = 12, pairs: int = 50, rng=None) -> LemmaResult:
    rng = rng or random.Random(0)
    slopes = list(all_slopes(bound))
    failures = []
    n = 0
    for a in slopes:
        for b in adjacent_slopes(a, bound):
            n += 1
            if not is_farey_edge(a, b):
                failures.append(f"{a} {b}")
            x, y = farey_neighbors(a, b)
            if not all(is_farey_edge(u, v) for u, v in ((a, x), (b, x), (a, y), (b, y))):
                failures.append(f"triangles on {a} {b}")
    for _ in range(pairs):
        a, b = rng.sample(slopes, 2)
        chain = triangle_path(a, b)
        n += 1
        if a not in chain[0] or b not in chain[-1]:
            failures.append(f"chain ends {a} {b}")
        if any(len(s & t) != 2 for s, t in zip(chain, chain[1:])):
            failures.append(f"chain {a} {b}")
    return _result("farey", n, failures)


def _charts(X: PantsDecomposition, limit: int):
    out = []
    for c in X.surface.interior_curves:
        try:
            out.append(chart_of(X, c))
        except (SisterConflict, Undetermined):
            continue
        if len(out) == limit:
            break
    return out


def check_p_mu(X: PantsDecomposition, depth: int = 3, bound: int = 5, limit: int = 4) -> LemmaResult:
    """Each 1-Farey ball matches the Farey ball under the slope map."""
    failures = []
    charts = _charts(X, limit)
    for ch in charts:
        adj, slope_of = p_mu_ball(ch, ch.slope, depth, bound)
        fb = farey_ball(ch.slope, depth, bound)
        mapped = {slope_of[x]: {slope_of[y] for y in ys} for x, ys in adj.items()}
        if mapped != fb:
            failures.append(ch.id)
    return _result("p_mu_farey", len(charts), failures)


def check_one_triangles(X: PantsDecomposition, depth: int = 2, bound: int = 3, limit: int = 2) -> LemmaResult:
    """3-loops in a union of two 1-Farey balls are 1-triangles exactly when they share one chart."""
    verts = set()
    for ch in _charts(X, limit):
        adj, _ = p_mu_ball(ch, ch.slope, depth, bound)
        verts |= set(adj)
    verts = sorted(verts, key=lambda v: v.key)
    failures = []
    n = 0
    for a, b, c in combinations(verts, 3):
        labels = [edge_label(a, b), edge_label(b, c), edge_label(c, a)]
        if None in labels:
            continue
        n += 1
        diffs = {tuple(diff_charts(x, y)) for x, y in ((a, b), (b, c), (c, a))}
        witness = len(diffs) == 1 and len(next(iter(diffs))) == 1
        if witness:
            (ch,) = next(iter(diffs))
            witness = all(is_farey_edge(x.value(ch), y.value(ch)) for x, y in ((a, b), (b, c), (c, a)))
        got, _ = is_one_triangle(Loop((a, b, c), tuple(labels)))
        if got != witness:
            failures.append(repr((a, b, c)))
    return _result("one_triangle", n, failures)


def check_intersections(surf: Surface, trials: int, rng) -> LemmaResult:
    failures = []
    n = 0
    while n < trials:
        X = random_decomposition(surf, rng, slopes=SLOPES)
        Y = X
        if rng.random() < 0.5:
            # move one chart so that the two multicurves have different homes
            ch = rng.choice(_charts(X, 99))
            Y = apply_move(X, ch.id, rng.choice(adjacent_slopes(ch.slope, 3)))
        cx, cy = rng.choice(_charts(X, 99)), rng.choice(_charts(Y, 99))
        if cx.mu == cy.mu:
            continue
        n += 1
        meet = farey_graphs_intersection(cx, cy)
        union = cx.mu | cy.mu
        try:
            Z = completion(surf, union)
            is_pd = Z.curves == union
        except SisterConflict:
            is_pd = False
        if len(meet) > 1 or (len(meet) == 1) != is_pd:
            failures.append(f"{cx.id} {cy.id}")
    return _result("intersection", n, failures)


def check_classification(surf: Surface, trials: int, rng) -> LemmaResult:
    failures = []
    n = 0
    while n < trials:
        X = random_decomposition(surf, rng, slopes=SLOPES)
        ch = rng.choice(_charts(X, 99))
        s = rng.choice(adjacent_slopes(ch.slope, 3))
        Y = apply_move(X, ch.id, s)
        alpha, beta = X.curve_at(ch.id), Y.curve_at(ch.id)
        n += 1
        for g in X.curves & Y.curves:
            if classify_pair(X, g, alpha) != classify_pair(Y, g, beta):
                failures.append(f"{g} vs {ch.id}")
    return _result("classification", n, failures)


def _far_moves(X: PantsDecomposition, alpha: str, rng, size: int):
    """Random non-sister set of curves far from or contiguous to ``alpha``, pairwise far."""
    surf = X.surface
    pool = [c for c in surf.interior_curves if c != alpha and classify_pair(X, alpha, c) != "sister"]
    rng.shuffle(pool)
    chosen = []
    for c in pool:
        if all(classify_pair(X, c, d) == FAR for d in chosen):
            try:
                chart_of(X, c)
            except SisterConflict:
                continue
            chosen.append(c)
        if len(chosen) == size:
            break
    return {c: rng.choice(adjacent_slopes(X.value(c), 2)) for c in chosen}


def random_square(X: PantsDecomposition, rng):
    """A random square on ``X`` with its alpha, or ``None`` if the draw is unusable."""
    alpha = rng.choice(X.surface.interior_curves)
    try:
        ch = chart_of(X, alpha)
    except (SisterConflict, Undetermined):
        return None
    try:
        slot_counts(X, alpha)
    except Undetermined:
        return None
    moves = _far_moves(X, alpha, rng, rng.randint(2, 4))
    if len(moves) < 2:
        return None
    try:
        loop = build_infty_alt_square(X, alpha, rng.choice(adjacent_slopes(ch.slope, 2)), moves)
    except (NotASquare, SisterConflict, MulticurveError):
        return None
    return alpha, moves, loop


def perturbed_square(X: PantsDecomposition, rng):
    """A 4-loop that breaks exactly one square clause."""
    alpha = rng.choice(X.surface.interior_curves)
    try:
        ch = chart_of(X, alpha)
    except (SisterConflict, Undetermined):
        return None
    s = rng.choice(adjacent_slopes(ch.slope, 2))
    W = apply_move(X, alpha, s)
    try:
        if rng.random() < 0.5:
            # all moves far from alpha: the diagonal W X' is an infinity-edge
            moves = _far_moves(X, alpha, rng, 3)
            moves = {c: t for c, t in moves.items() if classify_pair(X, alpha, c) == FAR}
            if len(moves) < 2:
                return None
            Xp = apply_infty_move(X, moves)
            Y = apply_move(Xp, alpha, s)
        else:
            # an extra far move on the last vertex spoils the label pattern
            moves = _far_moves(X, alpha, rng, 3)
            extra = [c for c in X.surface.interior_curves
                     if c != alpha and c not in moves and classify_pair(X, alpha, c) == FAR
                     and all(classify_pair(X, c, d) == FAR for d in moves)]
            if len(moves) < 2 or not extra:
                return None
            e = rng.choice(extra)
            Xp = apply_infty_move(X, moves)
            Y = apply_move(apply_move(Xp, alpha, s), e, rng.choice(adjacent_slopes(X.value(e), 2)))
        return Loop.of([W, X, Xp, Y])
    except MulticurveError:
        return None


def check_squares(surf: Surface, trials: int, rng) -> LemmaResult:
    failures = []
    good = bad = 0
    attempts = 0
    while (good < trials or bad < trials) and attempts < 50 * trials:
        attempts += 1
        X = random_decomposition(surf, rng, excite=0.15)
        if good < trials:
            got = random_square(X, rng)
            if got:
                alpha, _, loop = got
                good += 1
                m, n = slot_counts(X, alpha)
                if classify_loop(loop).kind != INFTY_SQUARE or not consecutive_intersection_check(loop):
                    failures.append(f"square at {alpha}")
                if not (1 <= m <= 4 and 1 <= n <= 8):
                    failures.append(f"slots {m},{n} at {alpha}")
        if bad < trials:
            loop = perturbed_square(X, rng)
            if loop:
                bad += 1
                if classify_loop(loop).kind != OTHER:
                    failures.append("perturbed square accepted")
    if good < trials or bad < trials:
        return LemmaResult("squares", None, good + bad, ["window too small to build squares"])
    return _result("squares", good + bad, failures)


def random_mixed_moves(X: PantsDecomposition, rng, size: int) -> dict:
    surf = X.surface
    pool = list(surf.interior_curves)
    rng.shuffle(pool)
    chosen = []
    for c in pool:
        if any(classify_pair(X, c, d) == "sister" for d in chosen):
            continue
        try:
            chart_of(X, c)
        except SisterConflict:
            continue
        chosen.append(c)
        if len(chosen) == size:
            break
    return {c: rng.choice(adjacent_slopes(X.value(c), 2)) for c in chosen}


def check_mixed(surf: Surface, trials: int, rng) -> LemmaResult:
    failures = []
    for _ in range(trials):
        X = random_decomposition(surf, rng, excite=0.2)
        moves = random_mixed_moves(X, rng, rng.randint(2, 6))
        steps = decompose_mixed_move(X, moves)
        delta = contiguity_degree(X, moves)
        Y = X
        for step in steps:
            if len(step) > 1 and any(classify_pair(Y, c, d) != FAR for c, d in combinations(step, 2)):
                failures.append("step not pairwise far")
            Y = Y.with_values(step)
        if Y != X.with_values(moves) or len(steps) > delta + 1:
            failures.append(f"{len(steps)} steps for degree {delta}")
    return _result("mixed_moves", trials, failures)


def lemma_suite(surf: Surface, depth: int = 3, seed: int = 0, trials: int = 30) -> list[LemmaResult]:
    rng = random.Random(seed)
    X = PantsDecomposition.base(surf)
    out = [
        check_farey(bound=8, rng=rng),
        check_p_mu(X, depth=depth, bound=max(depth, 3)),
        check_one_triangles(X, depth=min(depth, 2)),
        check_intersections(surf, trials, rng),
        check_classification(surf, trials, rng),
        check_mixed(surf, trials, rng),
    ]
    if surf.spec.is_infinite:
        out.append(check_squares(surf, max(1, trials // 3), rng))
    return out
