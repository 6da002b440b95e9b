"""Diameter-at-most-3 paths between vertices of G-infinity.

A vertex is a multicurve given by :class:`CurveRecord` entries: each curve
comes with the base pants it lives in (its window), the base curves it
crosses and an upper bound on its length.  Paths have the shape
``mu - v' - w' - nu`` where ``v'`` and ``w'`` keep only the curves of
completions ``v`` of ``mu`` and ``w`` of ``nu`` lying in supports of
alternate separating levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .decomposition import Curve, PantsDecomposition, completion, random_decomposition
from .errors import InsufficientWindow, InvalidVertex, SisterConflict, Undetermined
from .farey import INF, slope_intersection
from .metric import (
    EPS,
    FNMetric,
    chart_curve_length_bound,
    collar_width,
    crossing_support_bound,
    dist_lower,
    dist_upper,
)
from .surface import LevelSystem, Surface, level_system, sort_key

OUTSIDE = "outside:"


@dataclass(frozen=True, order=True)
class CurveRecord:
    curve: Curve
    window: frozenset = field(compare=False)
    crossings: frozenset = field(compare=False)
    length_upper: float = field(compare=False)

    def to_json(self) -> dict:
        return {
            "curve": str(self.curve),
            "window": sorted(self.window, key=sort_key),
            "crossings": sorted(self.crossings, key=sort_key),
            "length_upper": self.length_upper,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CurveRecord":
        return cls(
            Curve.parse(data["curve"]),
            frozenset(data["window"]),
            frozenset(data["crossings"]),
            float(data["length_upper"]),
        )


def record_for(surf: Surface, m: FNMetric, c: Curve) -> CurveRecord:
    if c.is_base:
        window = set(surf.pants_of(c.chart))
        if c.chart in surf.frontier:
            window.add(OUTSIDE + surf.frontier_groups[c.chart])
        return CurveRecord(c, frozenset(window), frozenset(), m.length(c.chart))
    return CurveRecord(
        c,
        frozenset(surf.chart_pants(c.chart)),
        frozenset({c.chart}),
        chart_curve_length_bound(surf, m, c.chart, c.slope),
    )


@dataclass(frozen=True)
class GInfVertex:
    """A multicurve on a window, with what is assumed beyond it.

    Beyond the window the multicurve is the base decomposition minus nothing
    (``tail_complexity`` 0) or is declared to leave open complementary pieces
    of extra complexity ``tail_complexity``; ``None`` means unknown.
    ``tail_length`` bounds the lengths of curves outside the window.
    """

    surface: Surface
    records: tuple
    tail_complexity: int | float | None = 0
    tail_length: float = 0.0

    @classmethod
    def from_curves(cls, surf: Surface, m: FNMetric, curves: Iterable, tail_complexity=0, tail_length=None):
        cs = sorted({c if isinstance(c, Curve) else Curve.parse(c) for c in curves})
        if not cs:
            raise InvalidVertex("empty multicurve")
        if tail_length is None:
            tail_length = max(m.periodic.values(), default=0.0) if surf.spec.is_infinite else 0.0
        return cls(surf, tuple(record_for(surf, m, c) for c in cs), tail_complexity, tail_length)

    @classmethod
    def from_decomposition(cls, X: PantsDecomposition, m: FNMetric, **kw):
        return cls.from_curves(X.surface, m, X.curves, **kw)

    @property
    def curves(self) -> frozenset:
        return frozenset(r.curve for r in self.records)

    def record(self, c: Curve) -> CurveRecord:
        for r in self.records:
            if r.curve == c:
                return r
        raise KeyError(str(c))

    def restricted(self, keep) -> "GInfVertex":
        return GInfVertex(self.surface, tuple(r for r in self.records if keep(r)), self.tail_complexity, self.tail_length)

    def to_json(self) -> dict:
        return {
            "records": [r.to_json() for r in self.records],
            "tail_complexity": self.tail_complexity,
            "tail_length": self.tail_length,
        }

    @classmethod
    def from_json(cls, surf: Surface, data: dict) -> "GInfVertex":
        return cls(
            surf,
            tuple(sorted(CurveRecord.from_json(r) for r in data["records"])),
            data.get("tail_complexity", 0),
            float(data.get("tail_length", 0.0)),
        )


@dataclass
class VertexReport:
    valid: bool
    Lsup: float
    Ksup: float
    components: list = field(default_factory=list)
    reason: str = ""


def _completion_of(v: GInfVertex) -> PantsDecomposition:
    try:
        X = completion(v.surface, v.curves)
    except SisterConflict as exc:
        raise InvalidVertex(f"curves overlap: {exc}") from exc
    if not v.curves <= X.curves:
        raise InvalidVertex("curves are not pairwise disjoint")
    return X


def complement_components(v: GInfVertex) -> list[tuple[int, int, bool]]:
    """Components of the window complement as ``(pants count, complexity, open)``."""
    X = _completion_of(v)
    frontier = v.surface.frontier
    missing = X.curves - v.curves
    parent = list(range(len(X.pants)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for c in missing:
        ids = X._pants_index[c]
        for j in ids[1:]:
            parent[find(j)] = find(ids[0])
    comps: dict[int, list] = {}
    for c in missing:
        root = find(X._pants_index[c][0])
        entry = comps.setdefault(root, [0, 0, False])
        entry[1] += 1
        if c.chart in frontier:
            entry[2] = True
    for i in range(len(X.pants)):
        if find(i) in comps:
            comps[find(i)][0] += 1
    return [tuple(e) for e in comps.values()]


def verify_ginf_vertex(v: GInfVertex) -> VertexReport:
    """Check the two conditions for a G-infinity vertex and report the achieved sups."""
    try:
        comps = complement_components(v)
    except InvalidVertex as exc:
        return VertexReport(False, math.nan, math.nan, [], str(exc))
    lengths = [r.length_upper for r in v.records] + [v.tail_length]
    Lsup = max(lengths)
    if not math.isfinite(Lsup):
        return VertexReport(False, Lsup, math.nan, comps, "lengths are unbounded")
    Ksup = 0
    for _, k, opened in comps:
        if opened:
            if v.tail_complexity is None:
                raise Undetermined("an open complementary component has unknown complexity beyond the window")
            k += v.tail_complexity
        Ksup = max(Ksup, k)
    if not math.isfinite(Ksup):
        return VertexReport(False, Lsup, Ksup, comps, "complementary components of unbounded complexity")
    return VertexReport(True, Lsup, Ksup, comps)


# supports


@dataclass
class Support:
    gamma: str
    pants: frozenset
    crossing: tuple
    complexity: int
    complement_components: int
    crossing_checks: list = field(default_factory=list)


def _frontier_groups_of(surf: Surface, members) -> set[str]:
    return {surf.frontier_groups[c] for p in members for c in surf.pants[p] if c in surf.frontier}


def support_subsurface(v: GInfVertex, gamma: str, m: FNMetric) -> Support:
    """Smallest union of base pants containing ``gamma`` and every curve of ``v`` crossing it.

    The smallest compact complementary pieces are absorbed until at most two
    complementary pieces remain.
    """
    surf = v.surface
    crossing = tuple(r for r in v.records if gamma in r.crossings)
    pants = set(surf.pants_of(gamma))
    checks = []
    for r in crossing:
        pants |= r.window
        kind = surf.chart_kind(r.curve.chart)
        i = slope_intersection(kind, r.curve.slope, INF)
        bound = crossing_support_bound(m, gamma, r.length_upper)
        checks.append((str(r.curve), i, bound))
        if i > bound:
            raise InvalidVertex(f"{r.curve} crosses {gamma} more often than its length allows")
    rest = set(surf.pants) - pants
    compact = []
    ends = [{surf.frontier_groups[f]} for f in surf.frontier if surf.curves[f][0] in pants]
    for members, _, opened in surf.side_data(rest, ()):
        if opened:
            ends.append(_frontier_groups_of(surf, members))
        else:
            compact.append(members)
    # pieces reaching the same end may connect beyond the window
    merged: list[set[str]] = []
    for g in ends:
        hit = [x for x in merged if x & g]
        for x in hit:
            merged.remove(x)
            g = g | x
        merged.append(set(g))
    compact.sort(key=lambda ms: (len(ms), sorted(map(sort_key, ms))))
    while compact and len(compact) + len(merged) > 2:
        pants |= compact.pop(0)
    return Support(gamma, frozenset(pants), crossing, surf.subsurface_complexity(pants), len(merged) + len(compact), checks)


# level selection


@dataclass
class LevelEvidence:
    level: int
    curve: str
    next_level: int
    nearest: list  # (curve, lower, upper)


@dataclass
class LevelSelection:
    levels: LevelSystem
    selected: list[int]
    L: float
    evidence: list[LevelEvidence]


def _minimal_window(ls: LevelSystem, m: FNMetric, L: float) -> int:
    widths = [2.0 * collar_width(m.length(c)) for c in ls.edges]
    wmin = min(widths)
    gap = math.floor((L + EPS) / wmin) + 2
    return ls.surface.spec.window + max(1, gap + 1 - ls.complete)


def select_levels(ls: LevelSystem, m: FNMetric, L: float) -> LevelSelection:
    """Greedy levels ``0 = i_0 < i_1 < ...`` with consecutive descendants more than ``L`` apart.

    Only levels lying entirely inside the window are used.
    """
    surf = ls.surface
    chosen = [0]
    evidence: list[LevelEvidence] = []
    i = 1
    while i < ls.complete:
        base = chosen[-1]
        rows = []
        ok = True
        for gamma in ls.levels[base]:
            near = []
            for g2 in ls.descendants(gamma, i):
                lo = dist_lower(surf, m, gamma, g2)
                if not lo - EPS > L:
                    ok = False
                    break
                near.append((g2, lo, dist_upper(surf, m, gamma, g2)))
            if not ok:
                break
            rows.append(LevelEvidence(base, gamma, i, near))
        if ok and any(r.nearest for r in rows):
            chosen.append(i)
            evidence.extend(rows)
        i += 1
    if len(chosen) < 2:
        need = _minimal_window(ls, m, L)
        raise InsufficientWindow(
            f"no second separating level within {ls.complete} complete levels for L={L:.6g}",
            minimal_window=need,
        )
    return LevelSelection(ls, chosen, L, evidence)


def slab_complexity(ls: LevelSystem) -> int:
    """Most base curves met by one genus-0 pants together with its attached handles."""
    surf = ls.surface
    best = 0
    for p in ls.vertices:
        seen = set()
        stack = [p]
        while stack:
            q = stack.pop()
            for c in surf.pants[q]:
                if c not in surf.curves:
                    continue
                seen.add(c)
                for r in surf.curves[c]:
                    if r not in ls.vertices and r not in seen:
                        seen.add(r)
                        stack.append(r)
        best = max(best, len({c for c in seen if c in surf.curves}))
    return best


def build_half(x: GInfVertex, sel: LevelSelection, parity: int, supports: dict) -> GInfVertex:
    """Curves of ``x`` inside the supports of the selected levels of one parity.

    Beyond the window the selection is continued periodically, so every open
    complementary piece gains at most the curves of two selection gaps.
    """
    region = set()
    for j, lev in enumerate(sel.selected):
        if j % 2 == parity:
            for gamma in sel.levels.levels[lev]:
                region |= supports[gamma].pants
    gaps = [b - a for a, b in zip(sel.selected, sel.selected[1:])]
    tail = 2 * max(gaps) * slab_complexity(sel.levels)
    half = x.restricted(lambda r: r.window <= region)
    return GInfVertex(x.surface, half.records, tail if x.surface.spec.is_infinite else 0, x.tail_length)


# paths


TRIVIAL = "trivial"
EDGE = "edge"
FULL = "full"


@dataclass
class PathCertificate:
    kind: str
    surface: Surface
    metric: FNMetric
    path: list
    L: float = 0.0
    v: GInfVertex | None = None
    w: GInfVertex | None = None
    selection: LevelSelection | None = None
    supports: dict = field(default_factory=dict)
    reports: list = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.path) - 1

    def to_json(self) -> dict:
        out = {
            "format": "ginf-path/1",
            "kind": self.kind,
            "dual_graph": self.surface.to_json(),
            "metric": self.metric.to_json(),
            "epsilon": EPS,
            "L": self.L,
            "path": [x.to_json() for x in self.path],
        }
        if self.kind == FULL:
            sel = self.selection
            out["completions"] = {"v": self.v.to_json(), "w": self.w.to_json()}
            out["levels"] = {
                "gamma0": sel.levels.gamma0,
                "selected": list(sel.selected),
                "curves": {str(i): list(sel.levels.levels[i]) for i in sel.selected},
                "evidence": [
                    {
                        "level": e.level,
                        "curve": e.curve,
                        "next_level": e.next_level,
                        "nearest": [{"curve": c, "lower": lo, "upper": up} for c, lo, up in e.nearest],
                    }
                    for e in sel.evidence
                ],
            }
            out["supports"] = {
                side: {g: sorted(s.pants, key=sort_key) for g, s in sorted(sup.items())}
                for side, sup in self.supports.items()
            }
            out["parity"] = {"v": 0, "w": 1}
        return out


def _union_is_multicurve(a: GInfVertex, b: GInfVertex) -> bool:
    try:
        X = completion(a.surface, a.curves | b.curves)
    except SisterConflict:
        return False
    return (a.curves | b.curves) <= X.curves


def _check_vertex(x: GInfVertex, name: str) -> VertexReport:
    rep = verify_ginf_vertex(x)
    if not rep.valid:
        raise InvalidVertex(f"{name} is not a vertex: {rep.reason}")
    return rep


def diameter_path(mu: GInfVertex, nu: GInfVertex, m: FNMetric, full: bool = False, gamma0: str | None = None) -> PathCertificate:
    """A path of length at most 3 from ``mu`` to ``nu`` with its certificate.

    ``full=True`` always builds the generic 3-path, even for equal or
    adjacent endpoints.
    """
    surf = mu.surface
    if nu.surface != surf:
        raise ValueError("vertices live on different surfaces")
    reports = [_check_vertex(mu, "mu"), _check_vertex(nu, "nu")]
    if not full:
        if mu.curves == nu.curves:
            return PathCertificate(TRIVIAL, surf, m, [mu], reports[0].Lsup, reports=reports[:1])
        if _union_is_multicurve(mu, nu):
            L = max(r.Lsup for r in reports)
            return PathCertificate(EDGE, surf, m, [mu, nu], L, reports=reports)
    if not surf.spec.is_infinite:
        raise Undetermined("the level construction needs an infinite family")
    v = GInfVertex.from_decomposition(_completion_of(mu), m, tail_length=mu.tail_length)
    w = GInfVertex.from_decomposition(_completion_of(nu), m, tail_length=nu.tail_length)
    rv, rw = _check_vertex(v, "v"), _check_vertex(w, "w")
    L = max(rv.Lsup, rw.Lsup)
    ls = level_system(surf, gamma0)
    sel = select_levels(ls, m, L)
    supports = {"v": {}, "w": {}}
    for lev in sel.selected:
        for gamma in ls.levels[lev]:
            supports["v"][gamma] = support_subsurface(v, gamma, m)
            supports["w"][gamma] = support_subsurface(w, gamma, m)
    _check_disjoint_supports(sel, supports)
    vh = build_half(v, sel, 0, supports["v"])
    wh = build_half(w, sel, 1, supports["w"])
    for x, name in ((vh, "v'"), (wh, "w'")):
        reports.append(_check_vertex(x, name))
    if not _union_is_multicurve(vh, wh):
        raise AssertionError("halves intersect")
    return PathCertificate(FULL, surf, m, [mu, vh, wh, nu], L, v, w, sel, supports, reports)


def _check_disjoint_supports(sel: LevelSelection, supports: dict):
    """Supports at levels of opposite parity share no pants."""
    levels = sel.levels.levels
    for j, a in enumerate(sel.selected):
        for k, b in enumerate(sel.selected):
            if j % 2 == k % 2:
                continue
            for g1 in levels[a]:
                for g2 in levels[b]:
                    for s1 in (supports["v"][g1], supports["w"][g1]):
                        for s2 in (supports["v"][g2], supports["w"][g2]):
                            if s1.pants & s2.pants:
                                raise Undetermined(f"supports of {g1} and {g2} overlap inside the window")


def random_vertex(surf: Surface, m: FNMetric, rng, excite: float = 0.3, keep: float = 0.5, slopes=("0/1", "1/1", "-1/1")) -> GInfVertex:
    """A random sub-multicurve of a random chart-model decomposition.

    Each curve of the decomposition is kept with probability ``keep``.
    """
    X = random_decomposition(surf, rng, excite, slopes)
    cs = sorted(X.curves)
    chosen = [c for c in cs if rng.random() < keep] or [rng.choice(cs)]
    return GInfVertex.from_curves(surf, m, chosen)


def lift(v: GInfVertex, bigger: Surface, m: FNMetric) -> GInfVertex:
    """The same vertex on a larger window; new curves are base curves."""
    old = v.surface
    extra = [Curve(c) for c in bigger.curves if c not in old.curves]
    return GInfVertex.from_curves(bigger, m, list(v.curves) + extra, v.tail_complexity, v.tail_length)
