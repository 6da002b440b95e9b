"""Pants decompositions over a base, charts and elementary moves.

Every base curve ``c`` owns a *chart*: the union of the (one or two) base pants
it bounds, a one-holed torus or a four-holed sphere.  A decomposition is the
base with some charts *excited*, i.e. their curve replaced by the curve of a
Farey slope inside the chart; the base curve itself has slope ``1/0``.
Excited charts must have disjoint interiors, which means their base curves are
pairwise non-sister.

On infinite families a decomposition may also carry a periodic pattern that
excites infinitely many charts; a pattern maps a curve family (``a``, ``t`` or
``c``) to one slope per residue class of the curve index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import lcm
from typing import Iterable, Mapping, Union

from .errors import NotFar, NotMinimal, SisterConflict, Undetermined
from .farey import INF, Slope, is_farey_edge
from .surface import Surface, sort_key, split_id

SISTER = "sister"
CONTIGUOUS = "contiguous"
FAR = "far"

ONE = "1"
INFINITY = "inf"


@dataclass(frozen=True, order=True)
class Curve:
    """The curve of slope ``slope`` in the chart of base curve ``chart``.

    Slope ``1/0`` is the base curve itself.
    """

    chart: str
    slope: Slope = INF

    @property
    def is_base(self) -> bool:
        return self.slope == INF

    def __str__(self):
        return self.chart if self.is_base else f"{self.chart}@{self.slope}"

    @classmethod
    def parse(cls, text: str) -> "Curve":
        if "@" in text:
            chart, slope = text.split("@")
            return cls(chart, Slope.parse(slope))
        return cls(text)


def base_curve(c: str) -> Curve:
    return Curve(c, INF)


CurveLike = Union[Curve, str]


def _chart_id(c: CurveLike) -> str:
    return c.chart if isinstance(c, Curve) else c


# periodic patterns


def _canonical_pattern(pattern: Mapping[str, Iterable]) -> tuple:
    out = []
    for fam, values in sorted(pattern.items()):
        vals = tuple(None if v is None else Slope.parse(v) for v in values)
        if not vals:
            continue
        n = len(vals)
        for d in range(1, n + 1):
            if n % d == 0 and all(vals[i] == vals[i % d] for i in range(n)):
                vals = vals[:d]
                break
        if all(v == INF or v is None for v in vals):
            continue
        out.append((fam, vals))
    return tuple(out)


def _pattern_value(pattern: tuple, chart: str):
    try:
        fam, idx = split_id(chart)
    except ValueError:
        return None
    for f, vals in pattern:
        if f == fam:
            return vals[idx % len(vals)]
    return None


def _merge_patterns(under: tuple, over: tuple) -> tuple:
    """Pattern equal to ``over`` where it names a slope and ``under`` elsewhere."""
    fams = {f for f, _ in under} | {f for f, _ in over}
    merged = {}
    for fam in fams:
        u = dict(under).get(fam, (INF,))
        o = dict(over).get(fam, (None,))
        n = lcm(len(u), len(o))
        merged[fam] = tuple(o[i % len(o)] if o[i % len(o)] is not None else u[i % len(u)] for i in range(n))
    return _canonical_pattern(merged)


class PantsDecomposition:
    """Immutable vertex of the chart-model G0 graph."""

    def __init__(self, surface: Surface, overrides: Mapping[str, Slope] | None = None, pattern=None):
        self.surface = surface
        if pattern and not surface.spec.is_infinite:
            raise ValueError("periodic patterns need an infinite family")
        self.pattern = _canonical_pattern(pattern or {}) if not isinstance(pattern, tuple) else pattern
        canon = {}
        for c, s in (overrides or {}).items():
            s = Slope.parse(s)
            if c not in surface.curves:
                raise KeyError(f"unknown curve {c}")
            default = INF if c in surface.frontier else (_pattern_value(self.pattern, c) or INF)
            if s != default:
                canon[c] = s
        self.overrides = dict(sorted(canon.items(), key=lambda kv: sort_key(kv[0])))
        self._validate()

    @classmethod
    def base(cls, surface: Surface) -> "PantsDecomposition":
        return cls(surface)

    # identity

    @cached_property
    def key(self):
        return (self.surface.spec, tuple((c, s) for c, s in self.overrides.items()), self.pattern)

    def __eq__(self, other):
        return isinstance(other, PantsDecomposition) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        ex = ", ".join(f"{c}:{s}" for c, s in self.excitations.items())
        return f"PantsDecomposition({self.surface.spec}; {ex or 'base'})"

    # values

    def value(self, c: str) -> Slope:
        if c in self.overrides:
            return self.overrides[c]
        if c in self.surface.frontier:
            return INF
        v = _pattern_value(self.pattern, c)
        return INF if v is None else v

    @cached_property
    def excitations(self) -> dict[str, Slope]:
        """Excited charts inside the window (finite part and pattern part)."""
        out = {}
        for c in self.surface.interior_curves:
            v = self.value(c)
            if v != INF:
                out[c] = v
        for c in self.overrides:
            if c in self.surface.frontier and self.overrides[c] != INF:
                out[c] = self.overrides[c]
        return out

    def _validate(self):
        surf = self.surface
        ex = self.excitations
        for c in ex:
            if c in surf.frontier:
                raise Undetermined(f"cannot excite frontier chart {c}")
        for c in ex:
            for d in surf.base_sisters(c):
                if d in ex and sort_key(c) < sort_key(d):
                    raise SisterConflict(f"sister charts {c} and {d} both excited")

    def curve_at(self, c: str) -> Curve:
        return Curve(c, self.value(c))

    @cached_property
    def curves(self) -> frozenset[Curve]:
        return frozenset(self.curve_at(c) for c in self.surface.curves)

    def with_values(self, changes: Mapping[str, Slope], pattern=None) -> "PantsDecomposition":
        """Copy with ``changes`` applied, and ``pattern`` overriding the periodic part."""
        pat = self.pattern
        newpat = ()
        if pattern:
            newpat = pattern if isinstance(pattern, tuple) else tuple(sorted(pattern.items()))
            pat = _merge_patterns(self.pattern, newpat)
        values = {}
        for c in self.surface.curves:
            if c in changes:
                values[c] = Slope.parse(changes[c])
            else:
                v = _pattern_value(newpat, c) if newpat else None
                values[c] = self.value(c) if v is None or c in self.surface.frontier else v
        return PantsDecomposition(self.surface, values, pat)

    # pants structure

    @cached_property
    def pants(self) -> tuple[tuple, ...]:
        """Pants of this decomposition as triples of cuffs (``Curve`` or leg id)."""
        surf = self.surface
        ex = self.excitations
        in_chart = {p for c in ex for p in surf.chart_pants(c)}

        def cuff(x: str):
            return self.curve_at(x) if x in surf.curves else x

        out = []
        for p, cuffs in sorted(surf.pants.items(), key=lambda kv: sort_key(kv[0])):
            if p not in in_chart:
                out.append(tuple(cuff(x) for x in cuffs))
        for c in sorted(ex, key=sort_key):
            s = ex[c]
            new = Curve(c, s)
            bd = [cuff(x) for x in surf.chart_cuffs(c)]
            if len(bd) == 1:
                out.append((new, new, bd[0]))
                continue
            b1, b2, b3, b4 = bd
            if s.p % 2 == 0:
                pairs = ((b1, b3), (b2, b4))
            elif s.q % 2 == 0:
                pairs = ((b1, b2), (b3, b4))
            else:
                pairs = ((b1, b4), (b2, b3))
            out.extend((new,) + pair for pair in pairs)
        return tuple(out)

    @cached_property
    def _pants_index(self) -> dict[Curve, list[int]]:
        idx: dict[Curve, list[int]] = {}
        for i, cuffs in enumerate(self.pants):
            for x in cuffs:
                if isinstance(x, Curve) and i not in idx.setdefault(x, []):
                    idx[x].append(i)
        return idx

    def resolve(self, c: CurveLike) -> Curve:
        if isinstance(c, Curve):
            if c not in self.curves:
                raise KeyError(f"{c} is not a curve of this decomposition")
            return c
        return self.curve_at(c)


# multicurve pairs


def classify_pair(X: PantsDecomposition, a: CurveLike, b: CurveLike) -> str:
    """Sister, contiguous or far relation of two curves of ``X``."""
    a, b = X.resolve(a), X.resolve(b)
    if a == b:
        raise ValueError("classify_pair needs two distinct curves")
    surf = X.surface
    # the outer pants of a frontier curve can meet the pants of an interior
    # curve only along the frontier curve itself
    if a.chart in surf.frontier and b.chart in surf.frontier:
        raise Undetermined("relation of two frontier curves")
    idx = X._pants_index
    pa, pb = idx[a], idx[b]
    if set(pa) & set(pb):
        return SISTER
    shared = {
        i: {x for x in X.pants[i] if isinstance(x, Curve)} for i in set(pa) | set(pb)
    }
    for i in pa:
        for j in pb:
            if shared[i] & shared[j]:
                return CONTIGUOUS
    return FAR


def sisters(X: PantsDecomposition, a: CurveLike) -> set[Curve]:
    a = X.resolve(a)
    out = set()
    for i in X._pants_index[a]:
        out.update(x for x in X.pants[i] if isinstance(x, Curve))
    out.discard(a)
    return out


def contiguous(X: PantsDecomposition, a: CurveLike) -> set[Curve]:
    a = X.resolve(a)
    out = set()
    for b in X.curves:
        if b == a or (a.chart in X.surface.frontier and b.chart in X.surface.frontier):
            continue
        if classify_pair(X, a, b) == CONTIGUOUS:
            out.add(b)
    return out


# charts and moves


@dataclass(frozen=True)
class Chart:
    id: str
    kind: str
    boundary: tuple[str, ...]
    slope: Slope
    home: PantsDecomposition = field(compare=False, repr=False)

    @property
    def mu(self) -> frozenset[Curve]:
        """The deficiency-1 multicurve whose complement is this chart."""
        return frozenset(c for c in self.home.curves if c.chart != self.id)

    @property
    def curve(self) -> Curve:
        return Curve(self.id, self.slope)


def chart_of(X: PantsDecomposition, c: CurveLike) -> Chart:
    cid = _chart_id(c)
    if isinstance(c, Curve) and X.value(cid) != c.slope:
        raise KeyError(f"{c} is not a curve of this decomposition")
    surf = X.surface
    if cid in surf.frontier:
        raise Undetermined(f"chart of {cid} reaches outside the window")
    if X.value(cid) == INF:
        for d in surf.base_sisters(cid):
            if X.value(d) != INF:
                raise SisterConflict(f"sister {d} of {cid} is excited")
    return Chart(
        id=cid,
        kind=surf.chart_kind(cid),
        boundary=surf.chart_cuffs(cid),
        slope=X.value(cid),
        home=X,
    )


def apply_move(X: PantsDecomposition, c: CurveLike, s: Slope | str) -> PantsDecomposition:
    s = Slope.parse(s)
    chart = chart_of(X, c)
    if not is_farey_edge(chart.slope, s):
        raise NotMinimal(f"{chart.slope} -> {s} is not an elementary move")
    return X.with_values({chart.id: s})


@dataclass(frozen=True)
class MoveMap:
    """Simultaneous moves: explicit charts plus an optional periodic rule.

    In ``pattern`` a ``None`` entry leaves that residue class untouched.
    """

    moves: tuple[tuple[str, Slope], ...] = ()
    pattern: tuple = ()

    @classmethod
    def of(cls, moves: Mapping[CurveLike, Slope | str] | None = None, pattern=None) -> "MoveMap":
        mv = tuple(sorted(((_chart_id(c), Slope.parse(s)) for c, s in (moves or {}).items()), key=lambda kv: sort_key(kv[0])))
        pat = ()
        if pattern:
            pat = tuple(
                (fam, tuple(None if v is None else Slope.parse(v) for v in vals))
                for fam, vals in sorted(pattern.items())
            )
        return cls(mv, pat)

    def targets(self, X: PantsDecomposition) -> dict[str, Slope]:
        """Charts actually moved in the window, with their new slopes."""
        out = {}
        if self.pattern:
            if not X.surface.spec.is_infinite:
                raise ValueError("periodic rules need an infinite family")
            for c in X.surface.interior_curves:
                v = _pattern_value(self.pattern, c)
                if v is not None and v != X.value(c):
                    out[c] = v
        for c, s in self.moves:
            if s != X.value(c):
                out[c] = s
            else:
                out.pop(c, None)
        return dict(sorted(out.items(), key=lambda kv: sort_key(kv[0])))

    def __len__(self):
        return len(self.moves)


def _as_movemap(moves) -> MoveMap:
    if isinstance(moves, MoveMap):
        return moves
    return MoveMap.of(moves)


def _check_single(X: PantsDecomposition, c: str, s: Slope):
    chart = chart_of(X, c)
    if not is_farey_edge(chart.slope, s):
        raise NotMinimal(f"{c}: {chart.slope} -> {s} is not an elementary move")


def apply_infty_move(X: PantsDecomposition, moves) -> PantsDecomposition:
    """Apply at least two simultaneous moves on pairwise far curves."""
    mm = _as_movemap(moves)
    targets = mm.targets(X)
    if len(targets) < 2 and not mm.pattern:
        raise NotFar("an infinity-edge needs at least two moves")
    for c, s in targets.items():
        _check_single(X, c, s)
    for c, d in combinations(targets, 2):
        rel = classify_pair(X, c, d)
        if rel != FAR:
            raise NotFar(f"{c} and {d} are {rel}")
    return X.with_values(dict(mm.moves), pattern=dict(mm.pattern) if mm.pattern else None)


def apply_moves(X: PantsDecomposition, moves) -> PantsDecomposition:
    """One elementary move or one infinity-move, whichever ``moves`` describes."""
    mm = _as_movemap(moves)
    targets = mm.targets(X)
    if len(targets) == 1 and not mm.pattern:
        (c, s), = targets.items()
        return apply_move(X, c, s)
    return apply_infty_move(X, mm)


def diff_charts(X: PantsDecomposition, Y: PantsDecomposition) -> list[str]:
    if X.surface != Y.surface:
        raise ValueError("decompositions over different bases")
    charts = set(X.excitations) | set(Y.excitations)
    return sorted((c for c in charts if X.value(c) != Y.value(c)), key=sort_key)


def edge_label(X: PantsDecomposition, Y: PantsDecomposition):
    """``ONE``, ``INFINITY`` or ``None`` for the pair ``X, Y``."""
    diff = diff_charts(X, Y)
    infinite = X.pattern != Y.pattern
    if not diff:
        if infinite:
            raise Undetermined("decompositions differ only outside the window")
        return None
    if any(not is_farey_edge(X.value(c), Y.value(c)) for c in diff):
        return None
    for c in diff:
        for Z in (X, Y):
            try:
                chart_of(Z, c)
            except SisterConflict:
                return None
    if len(diff) == 1 and not infinite:
        return ONE
    for c, d in combinations(diff, 2):
        if classify_pair(X, c, d) != FAR:
            return None
    return INFINITY


def decompose_mixed_move(X: PantsDecomposition, moves) -> list[dict[str, Slope]]:
    """Split far-or-contiguous simultaneous moves into pairwise-far steps.

    Greedy colouring of the contiguity graph on the moved curves; each colour
    class is one step, so at most ``max degree + 1`` steps are produced.
    """
    mm = _as_movemap(moves)
    if mm.pattern:
        raise NotImplementedError("mixed moves are decomposed for finite maps only")
    targets = mm.targets(X)
    for c, s in targets.items():
        _check_single(X, c, s)
    graph: dict[str, set[str]] = {c: set() for c in targets}
    for c, d in combinations(targets, 2):
        rel = classify_pair(X, c, d)
        if rel == SISTER:
            raise NotFar(f"{c} and {d} are sisters")
        if rel == CONTIGUOUS:
            graph[c].add(d)
            graph[d].add(c)
    colour: dict[str, int] = {}
    for c in sorted(targets, key=sort_key):
        used = {colour[d] for d in graph[c] if d in colour}
        k = 0
        while k in used:
            k += 1
        colour[c] = k
    steps: list[dict[str, Slope]] = []
    for c in sorted(targets, key=sort_key):
        k = colour[c]
        while len(steps) <= k:
            steps.append({})
        steps[k][c] = targets[c]
    return steps


def contiguity_degree(X: PantsDecomposition, charts: Iterable[str]) -> int:
    charts = list(charts)
    deg = {c: 0 for c in charts}
    for c, d in combinations(charts, 2):
        if classify_pair(X, c, d) == CONTIGUOUS:
            deg[c] += 1
            deg[d] += 1
    return max(deg.values(), default=0)


# multicurves over the base


def completion(surface: Surface, mu: Iterable[Curve]) -> PantsDecomposition:
    """Greedy completion of ``mu`` by base curves."""
    ex = {}
    for c in mu:
        if not c.is_base:
            if c.chart in ex and ex[c.chart] != c.slope:
                raise SisterConflict(f"two curves in chart {c.chart}")
            ex[c.chart] = c.slope
    X = PantsDecomposition(surface, ex)
    return X


def deficiency(surface: Surface, mu: Iterable[Curve]) -> int:
    """Number of curves missing from a pants decomposition containing ``mu``."""
    mu = frozenset(mu)
    X = completion(surface, mu)
    if not mu <= X.curves:
        raise ValueError("not a sub-multicurve of a chart-model decomposition")
    missing = X.curves - mu
    if any(c.chart in surface.frontier for c in missing):
        raise Undetermined("complement reaches outside the window")
    return len(missing)


def random_decomposition(surface: Surface, rng, excite: float = 0.3, slopes=("0/1", "1/1", "-1/1")) -> PantsDecomposition:
    """Random chart-model vertex: charts excited in random order, skipping sisters."""
    ex: dict[str, Slope] = {}
    order = list(surface.interior_curves)
    rng.shuffle(order)
    for c in order:
        if rng.random() < excite and not (surface.base_sisters(c) & ex.keys()):
            ex[c] = Slope.parse(rng.choice(slopes))
    return PantsDecomposition(surface, ex)
