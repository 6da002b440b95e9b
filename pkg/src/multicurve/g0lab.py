"""Loops and Farey subgraphs inside the chart-model G0 graph.

Loops are cyclic vertex lists with edge labels.  Vertices are usually
:class:`PantsDecomposition` values; hand-encoded loops on complexity-2 surfaces
use :class:`AbstractVertex` with labels (and diagonal labels) supplied by the
caller, since such loops need curve algebra outside the chart model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .decomposition import (
    CONTIGUOUS,
    INFINITY,
    ONE,
    SISTER,
    Chart,
    Curve,
    MoveMap,
    PantsDecomposition,
    apply_infty_move,
    apply_move,
    classify_pair,
    completion,
    contiguous,
    edge_label,
    sisters,
)
from .errors import InvalidLoop, NotASquare, SisterConflict, Undetermined
from .farey import Slope, farey_ball, triangle_path

ONE_TRIANGLE = "one-triangle"
ALTERNATING = "alternating-loop"
INFTY_SQUARE = "infty-alternating-square"
OTHER = "other"


@dataclass(frozen=True)
class AbstractVertex:
    """A pants decomposition given only by the names of its curves."""

    name: str
    curves: frozenset = field(compare=False)

    @classmethod
    def of(cls, name: str, curves: Iterable[str]) -> "AbstractVertex":
        return cls(name, frozenset(curves))


@dataclass(frozen=True)
class Loop:
    vertices: tuple
    labels: tuple
    chords: Mapping = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        n = len(self.vertices)
        if n < 3:
            raise InvalidLoop("a loop has at least three vertices")
        if len(set(self.vertices)) != n:
            raise InvalidLoop("loop vertices repeat")
        if len(self.labels) != n:
            raise InvalidLoop("one label per edge")
        if any(lab not in (ONE, INFINITY) for lab in self.labels):
            raise InvalidLoop("consecutive vertices must span an edge")

    @classmethod
    def of(cls, vertices: Sequence[PantsDecomposition]) -> "Loop":
        """Loop through chart-model vertices, labels computed by ``edge_label``."""
        vs = tuple(vertices)
        labels = []
        for i, x in enumerate(vs):
            lab = edge_label(x, vs[(i + 1) % len(vs)])
            if lab is None:
                raise InvalidLoop(f"vertices {i} and {(i + 1) % len(vs)} do not span an edge")
            labels.append(lab)
        return cls(vs, tuple(labels))

    @classmethod
    def abstract(cls, vertices: Sequence[AbstractVertex], labels: Sequence[str], chords=None) -> "Loop":
        return cls(tuple(vertices), tuple(labels), dict(chords or {}))

    def __len__(self):
        return len(self.vertices)

    def rotated(self, k: int) -> "Loop":
        n = len(self)
        vs = tuple(self.vertices[(i + k) % n] for i in range(n))
        ls = tuple(self.labels[(i + k) % n] for i in range(n))
        return Loop(vs, ls, None if self.chords is None else dict(self.chords))

    def reversed(self) -> "Loop":
        n = len(self)
        vs = tuple(reversed(self.vertices))
        # edge i of the reversed loop joins vs[i], vs[i+1] = old n-1-i, n-2-i
        ls = tuple(self.labels[(n - 2 - i) % n] for i in range(n))
        return Loop(vs, ls, None if self.chords is None else dict(self.chords))

    def label_between(self, x, y):
        """Edge label of an arbitrary pair of loop vertices."""
        if isinstance(x, PantsDecomposition):
            return edge_label(x, y)
        n = len(self)
        i, j = self.vertices.index(x), self.vertices.index(y)
        if (i + 1) % n == j:
            return self.labels[i]
        if (j + 1) % n == i:
            return self.labels[j]
        chords = self.chords or {}
        return chords.get((x.name, y.name), chords.get((y.name, x.name)))


def _curves(v) -> frozenset:
    return v.curves


def intersection(vertices: Iterable) -> frozenset:
    vs = list(vertices)
    out = _curves(vs[0])
    for v in vs[1:]:
        out = out & _curves(v)
    return out


def _deficiency_of(vertices: Sequence) -> float:
    vs = list(vertices)
    if isinstance(vs[0], PantsDecomposition):
        if len({v.pattern for v in vs}) > 1:
            return math.inf
    common = intersection(vs)
    return len(_curves(vs[0]) - common)


def loop_deficiency(L: Loop) -> float:
    """Deficiency of the intersection of all loop vertices (``inf`` for periodic differences)."""
    return _deficiency_of(L.vertices)


def is_one_triangle(L: Loop):
    """``(True, mu)`` when ``L`` is a 1-triangle with common deficiency-1 multicurve ``mu``."""
    if len(L) != 3 or any(lab != ONE for lab in L.labels):
        return False, None
    if _deficiency_of(L.vertices) != 1:
        return False, None
    return True, intersection(L.vertices)


@dataclass
class LoopClass:
    kind: str
    k: int | None = None
    deficiency: float | None = None
    witness: frozenset | None = None
    failed: list[str] = field(default_factory=list)


_SQUARE_PATTERNS = {(ONE, INFINITY, ONE, INFINITY), (INFINITY, ONE, INFINITY, ONE)}


def classify_loop(L: Loop) -> LoopClass:
    deficiency = loop_deficiency(L)
    failed: list[str] = []
    ok, mu = is_one_triangle(L)
    if ok:
        return LoopClass(ONE_TRIANGLE, 3, deficiency, mu)
    n = len(L)
    if n == 3:
        failed.append("triangle: not all 1-edges with a deficiency-1 intersection")
    if n in (4, 5, 6) and all(lab == ONE for lab in L.labels):
        if deficiency != 2:
            failed.append(f"alternating: deficiency {deficiency} != 2")
        else:
            bad = [
                i for i in range(n)
                if _deficiency_of([L.vertices[(i + j) % n] for j in range(3)]) <= 1
            ]
            if bad:
                failed.append(f"alternating: consecutive triple at {bad[0]} lies in a 1-Farey graph")
            else:
                return LoopClass(ALTERNATING, n, deficiency, intersection(L.vertices))
    elif n in (4, 5, 6):
        failed.append("alternating: some edge is an infinity-edge")
    if n == 4:
        if tuple(L.labels) not in _SQUARE_PATTERNS:
            failed.append(f"square: label pattern {'-'.join(L.labels)}")
        else:
            v = L.vertices
            diag = [L.label_between(v[0], v[2]), L.label_between(v[1], v[3])]
            if INFINITY in diag:
                failed.append("square: a diagonal spans an infinity-edge")
            else:
                return LoopClass(INFTY_SQUARE, 4, deficiency, intersection(L.vertices))
    return LoopClass(OTHER, n, deficiency, None, failed)


def consecutive_intersection_check(L: Loop) -> bool:
    cls = classify_loop(L)
    if cls.kind not in (ALTERNATING, INFTY_SQUARE):
        raise ValueError(f"expected an alternating loop or square, got {cls.kind}")
    whole = intersection(L.vertices)
    n = len(L)
    return all(
        intersection(L.vertices[(i + j) % n] for j in range(3)) == whole for i in range(n)
    )


# 1-Farey graphs


def p_mu_ball(chart: Chart, center: Slope | str, depth: int, bound: int = 6):
    """Ball of the 1-Farey graph of ``chart.mu`` around the vertex at ``center``.

    Slopes are restricted to height at most ``bound``.  Returns
    ``(adjacency, slope_of)`` where ``slope_of`` maps each vertex to its slope.
    """
    center = Slope.parse(center)
    X = chart.home
    fb = farey_ball(center, depth, bound)
    vertex = {s: X.with_values({chart.id: s}) for s in fb}
    adj = {vertex[s]: {vertex[t] for t in nbrs} for s, nbrs in fb.items()}
    for x, nbrs in adj.items():
        for y in nbrs:
            if edge_label(x, y) != ONE:
                raise AssertionError("1-Farey graph edge is not a 1-edge")
    return adj, {v: s for s, v in vertex.items()}


@dataclass(frozen=True)
class MarkedFareyGraph:
    chart: Chart
    marked: PantsDecomposition

    def __post_init__(self):
        if not self.chart.mu <= self.marked.curves:
            raise ValueError("marked vertex does not contain mu")


def marked_represents(F: MarkedFareyGraph) -> Curve:
    (alpha,) = F.marked.curves - F.chart.mu
    return alpha


def farey_graphs_intersection(mu: Chart, nu: Chart) -> set[PantsDecomposition]:
    """Vertices common to the 1-Farey graphs of two distinct deficiency-1 multicurves."""
    a, b = mu.mu, nu.mu
    if a == b:
        raise ValueError("the two 1-Farey graphs coincide")
    union = a | b
    charts = [c.chart for c in union]
    if len(charts) != len(set(charts)):
        return set()
    try:
        Z = completion(mu.home.surface, union)
    except SisterConflict:
        return set()
    if Z.curves != union:
        return set()
    return {Z}


def triangle_chain(chart: Chart, a: Slope | str, b: Slope | str) -> list[Loop]:
    X = chart.home
    out = []
    for tri in triangle_path(Slope.parse(a), Slope.parse(b)):
        out.append(Loop.of([X.with_values({chart.id: s}) for s in sorted(tri)]))
    return out


# squares


def slot_counts(X: PantsDecomposition, alpha) -> tuple[int, int]:
    """Numbers of sister and contiguous curves of ``alpha`` in ``X``.

    Undetermined when a pants of ``alpha`` touches the frontier, since the
    pants beyond it may hold further contiguous curves.
    """
    a = X.resolve(alpha)
    frontier = X.surface.frontier
    for i in X._pants_index[a]:
        if any(isinstance(x, Curve) and x.chart in frontier for x in X.pants[i]):
            raise Undetermined(f"neighbourhood of {a} reaches outside the window")
    return len(sisters(X, a)), len(contiguous(X, a))


def build_infty_alt_square(X: PantsDecomposition, alpha, alpha_slope: Slope | str, far_moves) -> Loop:
    """The square ``W -1- X -inf- X' -1- Y -inf- W``.

    ``W`` moves ``alpha`` to ``alpha_slope``, ``X'`` applies ``far_moves`` and
    ``Y`` applies both.
    """
    mm = far_moves if isinstance(far_moves, MoveMap) else MoveMap.of(far_moves)
    a = X.resolve(alpha)
    targets = mm.targets(X)
    if a.chart in targets:
        raise NotASquare("alpha may not be among the infinity-moves")
    rels = {c: classify_pair(X, a, c) for c in targets}
    bad = [c for c, r in rels.items() if r == SISTER]
    if bad:
        raise SisterConflict(f"infinity-move on sister {bad[0]} of alpha")
    if CONTIGUOUS not in rels.values():
        raise NotASquare("every moved curve is far from alpha; W and X' would span an infinity-edge")
    W = apply_move(X, a, alpha_slope)
    Xp = apply_infty_move(X, mm)
    Y = apply_infty_move(W, mm)
    if apply_move(Xp, a.chart, alpha_slope) != Y:
        raise NotASquare("moves do not commute")
    loop = Loop.of([W, X, Xp, Y])
    if classify_loop(loop).kind != INFTY_SQUARE:
        raise NotASquare("constructed loop fails the square clauses")
    return loop
