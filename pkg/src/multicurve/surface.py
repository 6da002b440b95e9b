"""Surfaces as trivalent pants dual graphs.

A surface is stored by the dual graph of its canonical base pants
decomposition: one node per pair of pants, one edge per base curve (loop edges
for non-separating curves bounding a single pants twice) and one stub per
boundary component.  Infinite families are truncated to a finite *window*; the
curves cut by the truncation form the *frontier*.

Canonical bases are in handle-normal form: every handle is a pants ``H<i>``
carrying a loop ``a<i>`` and attached by a torus curve ``t<i>``; the genus-0
part is a chain of pants ``C<i>`` joined by chain curves ``c<i>``.
"""

from __future__ import annotations

import os
import re
import threading
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .errors import InvalidSurface, Undetermined

FINITE = "finite"
LADDER = "ladder"
LOCHNESS = "lochness"
FAMILIES = (LADDER, LOCHNESS)

_ID_RE = re.compile(r"^([A-Za-z]+)(-?\d+)$")


def complexity(genus: int, boundary: int) -> int:
    """Number of curves in a pants decomposition of the genus-``genus`` surface with ``boundary`` boundary components."""
    return 3 * genus - 3 + boundary


def split_id(name: str) -> tuple[str, int]:
    m = _ID_RE.match(name)
    if not m:
        raise ValueError(f"malformed id {name!r}")
    return m.group(1), int(m.group(2))


@dataclass(frozen=True)
class SurfaceSpec:
    kind: str
    genus: int = 0
    boundary: int = 0
    window: int = 0

    def __post_init__(self):
        if self.kind == FINITE:
            if self.genus < 0 or self.boundary < 0:
                raise InvalidSurface("genus and boundary must be nonnegative")
            if complexity(self.genus, self.boundary) < 1:
                raise InvalidSurface(
                    f"S_{self.genus},{self.boundary} has no pants curve"
                )
        elif self.kind in FAMILIES:
            if self.window < 1:
                raise InvalidSurface("window must be a positive integer")
        else:
            raise InvalidSurface(f"unknown surface kind {self.kind!r}")

    @classmethod
    def finite(cls, genus: int, boundary: int) -> "SurfaceSpec":
        return cls(FINITE, genus=genus, boundary=boundary)

    @classmethod
    def ladder(cls, window: int) -> "SurfaceSpec":
        return cls(LADDER, window=window)

    @classmethod
    def lochness(cls, window: int) -> "SurfaceSpec":
        return cls(LOCHNESS, window=window)

    @property
    def is_infinite(self) -> bool:
        return self.kind in FAMILIES

    def enlarged(self, by: int) -> "SurfaceSpec":
        if not self.is_infinite:
            return self
        return SurfaceSpec(self.kind, window=self.window + by)

    def to_json(self) -> dict:
        if self.kind == FINITE:
            return {"kind": FINITE, "g": self.genus, "b": self.boundary}
        return {"kind": self.kind, "window": self.window}

    @classmethod
    def from_json(cls, data: dict) -> "SurfaceSpec":
        kind = data.get("kind")
        if kind == FINITE:
            return cls.finite(int(data["g"]), int(data["b"]))
        if kind in FAMILIES:
            return cls(kind, window=int(data["window"]))
        raise InvalidSurface(f"unknown surface kind {kind!r}")

    def __str__(self):
        if self.kind == FINITE:
            return f"S_{self.genus},{self.boundary}"
        return f"{self.kind}({self.window})"


class Surface:
    """Dual graph of the canonical base pants decomposition.

    ``pants`` maps a pants id to its three cuffs (curve or leg ids; a loop
    curve appears twice).  ``curves`` maps a curve id to the pants it bounds:
    two entries for interior curves (equal for loops), one for frontier curves.
    """

    def __init__(self, spec: SurfaceSpec, pants, curves, legs, frontier_groups):
        self.spec = spec
        self.pants: dict[str, tuple[str, str, str]] = dict(pants)
        self.curves: dict[str, tuple[str, ...]] = dict(curves)
        self.legs: dict[str, str] = dict(legs)
        # frontier curve -> end label; tails with equal labels may connect
        self.frontier_groups: dict[str, str] = dict(frontier_groups)
        self.frontier = frozenset(self.frontier_groups)
        self._lock = threading.Lock()
        self._cut_cache: dict[str, tuple[dict[str, int], dict[int, set[str]]]] = {}

    def __repr__(self):
        return f"Surface({self.spec})"

    def __eq__(self, other):
        return isinstance(other, Surface) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    # basic queries

    def is_frontier(self, c: str) -> bool:
        return c in self.frontier

    def is_loop(self, c: str) -> bool:
        ends = self.curves[c]
        return len(ends) == 2 and ends[0] == ends[1]

    @cached_property
    def interior_curves(self) -> tuple[str, ...]:
        return tuple(sorted((c for c in self.curves if c not in self.frontier), key=sort_key))

    def pants_of(self, c: str) -> tuple[str, ...]:
        """Distinct pants bounded by ``c`` (window only)."""
        return tuple(dict.fromkeys(self.curves[c]))

    def chart_pants(self, c: str) -> tuple[str, ...]:
        if c in self.frontier:
            raise Undetermined(f"chart of {c} reaches outside the window")
        return self.pants_of(c)

    def chart_kind(self, c: str) -> str:
        from .farey import S04, S11

        self.chart_pants(c)
        return S11 if self.is_loop(c) else S04

    def chart_cuffs(self, c: str) -> tuple[str, ...]:
        """Boundary of the chart of ``c``: 4 entries for S04, 1 for S11, in base order."""
        ps = self.chart_pants(c)
        out = []
        if len(ps) == 1:
            cuffs = list(self.pants[ps[0]])
            cuffs.remove(c)
            cuffs.remove(c)
            return tuple(cuffs)
        for p in ps:
            cuffs = list(self.pants[p])
            cuffs.remove(c)
            out.extend(cuffs)
        return tuple(out)

    def base_sisters(self, c: str) -> set[str]:
        out = set()
        for p in self.pants_of(c):
            out.update(x for x in self.pants[p] if x in self.curves)
        out.discard(c)
        return out

    def neighbours(self, p: str) -> Iterable[tuple[str, str]]:
        """``(curve, other pants)`` for every window curve on ``p`` joining two pants."""
        for c in self.pants[p]:
            if c in self.curves:
                for q in self.curves[c]:
                    if q != p:
                        yield c, q

    def dual_path(self, a: str, b: str) -> list[tuple[str, str, str]]:
        """Shortest pants path from curve ``a`` to curve ``b``.

        Returned as ``(pants, entry cuff, exit cuff)`` triples.
        """
        starts = self.pants_of(a)
        targets = set(self.pants_of(b))
        prev: dict[str, tuple[str, str] | None] = {p: None for p in starts}
        queue = deque(starts)
        end = None
        while queue:
            p = queue.popleft()
            if p in targets:
                end = p
                break
            for c, q in self.neighbours(p):
                if q not in prev:
                    prev[q] = (p, c)
                    queue.append(q)
        if end is None:
            raise Undetermined(f"no path from {a} to {b} inside the window")
        chain = [end]
        crossings = []
        while prev[chain[-1]] is not None:
            p, c = prev[chain[-1]]
            crossings.append(c)
            chain.append(p)
        chain.reverse()
        crossings.reverse()
        entries = [a] + crossings
        exits = crossings + [b]
        return list(zip(chain, entries, exits))

    # components after cutting

    def _cut(self, delta: str):
        with self._lock:
            hit = self._cut_cache.get(delta)
        if hit is not None:
            return hit
        comp: dict[str, int] = {}
        groups: dict[int, set[str]] = {}
        n = 0
        for start in self.pants:
            if start in comp:
                continue
            comp[start] = n
            groups[n] = set()
            queue = deque([start])
            while queue:
                p = queue.popleft()
                for c in self.pants[p]:
                    if c == delta or c not in self.curves:
                        continue
                    if c in self.frontier:
                        groups[n].add(self.frontier_groups[c])
                        continue
                    for q in self.curves[c]:
                        if q not in comp:
                            comp[q] = n
                            queue.append(q)
            n += 1
        result = (comp, groups)
        with self._lock:
            self._cut_cache[delta] = result
        return result

    def separates(self, delta: str, a: str, b: str) -> bool:
        """Whether cutting base curve ``delta`` puts ``a`` and ``b`` on different sides."""
        if delta in (a, b) or delta in self.frontier:
            return False
        comp, groups = self._cut(delta)
        ca = comp[self.pants_of(a)[0]]
        cb = comp[self.pants_of(b)[0]]
        if ca == cb:
            return False
        if groups[ca] & groups[cb]:
            raise Undetermined(f"sides of {delta} may reconnect outside the window")
        return True

    def separators(self, a: str, b: str) -> list[str]:
        if a in self.frontier or b in self.frontier:
            raise Undetermined("separator set of a frontier curve")
        return [d for d in self.interior_curves if self.separates(d, a, b)]

    def side_data(self, pants_set: Iterable[str], cut: Iterable[str]):
        """Components of the window dual graph after cutting the curves ``cut``.

        Restricted to the pants in ``pants_set``.  Returns a list of
        ``(pants, interior curves, open)`` where ``open`` marks components that
        reach the frontier.
        """
        cut = set(cut)
        allowed = set(pants_set)
        seen: set[str] = set()
        out = []
        for start in sorted(allowed, key=sort_key):
            if start in seen:
                continue
            seen.add(start)
            members = {start}
            interior = set()
            opened = False
            queue = deque([start])
            while queue:
                p = queue.popleft()
                for c in self.pants[p]:
                    if c not in self.curves or c in cut:
                        continue
                    if c in self.frontier:
                        opened = True
                        interior.add(c)
                        continue
                    ends = self.curves[c]
                    if all(q in allowed for q in ends):
                        interior.add(c)
                        for q in ends:
                            if q not in seen:
                                seen.add(q)
                                members.add(q)
                                queue.append(q)
            out.append((members, interior, opened))
        return out

    def subsurface_complexity(self, pants_set: Iterable[str]) -> int:
        """Curves of the base lying in the interior of a union of base pants."""
        s = set(pants_set)
        return sum(
            1
            for c, ends in self.curves.items()
            if c not in self.frontier and all(p in s for p in ends)
        )

    # export

    def to_json(self) -> dict:
        return {
            "surface": self.spec.to_json(),
            "pants": {p: list(cuffs) for p, cuffs in sorted(self.pants.items(), key=lambda kv: sort_key(kv[0]))},
            "curves": {c: list(ends) for c, ends in sorted(self.curves.items(), key=lambda kv: sort_key(kv[0]))},
            "legs": dict(sorted(self.legs.items(), key=lambda kv: sort_key(kv[0]))),
            "frontier": dict(sorted(self.frontier_groups.items())),
        }

    def to_dot(self) -> str:
        lines = [f'graph "{self.spec}" {{']
        for p in sorted(self.pants, key=sort_key):
            lines.append(f'  "{p}" [shape=triangle];')
        for leg, p in sorted(self.legs.items()):
            lines.append(f'  "{leg}" [shape=point];')
            lines.append(f'  "{p}" -- "{leg}";')
        for c, ends in sorted(self.curves.items(), key=lambda kv: sort_key(kv[0])):
            if len(ends) == 1:
                lines.append(f'  "{c}_out" [shape=none, label="..."];')
                lines.append(f'  "{ends[0]}" -- "{c}_out" [label="{c}", style=dashed];')
            else:
                lines.append(f'  "{ends[0]}" -- "{ends[1]}" [label="{c}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def sort_key(name: str):
    try:
        fam, idx = split_id(name)
    except ValueError:
        return (name, 0)
    return (fam, idx)


def _window_cap() -> int | None:
    raw = os.environ.get("MULTICURVE_WINDOW_MAX")
    return int(raw) if raw else None


class _Builder:
    def __init__(self):
        self.pants: dict[str, list[str]] = {}
        self.curves: dict[str, list[str]] = {}
        self.legs: dict[str, str] = {}

    def add(self, p: str, *cuffs: str):
        self.pants[p] = list(cuffs)

    def glue(self):
        for p, cuffs in self.pants.items():
            for c in cuffs:
                if c.startswith("L"):
                    self.legs[c] = p
                else:
                    self.curves.setdefault(c, []).append(p)


def _build_finite(spec: SurfaceSpec) -> Surface:
    g, b = spec.genus, spec.boundary
    bld = _Builder()
    terminals = [("handle", i) for i in range(g)] + [("leg", j) for j in range(b)]
    n = len(terminals)

    def stub(term):
        kind, i = term
        return f"t{i}" if kind == "handle" else f"L{i}"

    if n == 2:
        # the two terminals are glued directly: S_2,0 or S_1,1
        (k0, i0), (k1, i1) = terminals
        if k0 == "handle" and k1 == "handle":
            bld.add(f"H{i0}", f"a{i0}", f"a{i0}", "t0")
            bld.add(f"H{i1}", f"a{i1}", f"a{i1}", "t0")
        else:
            bld.add("H0", "a0", "a0", "L0")
    else:
        for kind, i in terminals:
            if kind == "handle":
                bld.add(f"H{i}", f"a{i}", f"a{i}", f"t{i}")
        chain = n - 2
        for k in range(chain):
            left = stub(terminals[0]) if k == 0 else f"c{k - 1}"
            right = stub(terminals[n - 1]) if k == chain - 1 else f"c{k}"
            if chain == 1:
                mid = [stub(terminals[1])]
            else:
                mid = [stub(terminals[k + 1])]
            bld.add(f"C{k}", left, *mid, right)
    bld.glue()
    return Surface(spec, {p: tuple(c) for p, c in bld.pants.items()},
                   {c: tuple(e) for c, e in bld.curves.items()}, bld.legs, {})


def _build_family(spec: SurfaceSpec) -> Surface:
    w = spec.window
    cap = _window_cap()
    if cap is not None and w > cap:
        raise InvalidSurface(f"window {w} exceeds MULTICURVE_WINDOW_MAX={cap}")
    bld = _Builder()
    groups = {}
    if spec.kind == LADDER:
        for k in range(-w, w + 1):
            bld.add(f"C{k}", f"c{k - 1}", f"t{k}", f"c{k}")
            bld.add(f"H{k}", f"a{k}", f"a{k}", f"t{k}")
        groups = {f"c{-w - 1}": "left", f"c{w}": "right"}
    else:
        bld.add("H-1", "a-1", "a-1", "t-1")
        bld.add("C0", "t-1", "t0", "c0")
        bld.add("H0", "a0", "a0", "t0")
        for k in range(1, w + 1):
            bld.add(f"C{k}", f"c{k - 1}", f"t{k}", f"c{k}")
            bld.add(f"H{k}", f"a{k}", f"a{k}", f"t{k}")
        groups = {f"c{w}": "end"}
    bld.glue()
    return Surface(spec, {p: tuple(c) for p, c in bld.pants.items()},
                   {c: tuple(e) for c, e in bld.curves.items()}, bld.legs, groups)


_SURFACES: dict[SurfaceSpec, Surface] = {}
_SURFACES_LOCK = threading.Lock()


def build_surface(spec: SurfaceSpec | dict) -> Surface:
    """Dual graph of the canonical base decomposition (memoized, idempotent)."""
    if isinstance(spec, dict):
        spec = SurfaceSpec.from_json(spec)
    with _SURFACES_LOCK:
        hit = _SURFACES.get(spec)
    if hit is not None:
        return hit
    surf = _build_finite(spec) if spec.kind == FINITE else _build_family(spec)
    _check_trivalent(surf)
    with _SURFACES_LOCK:
        return _SURFACES.setdefault(spec, surf)


def _check_trivalent(surf: Surface):
    for p, cuffs in surf.pants.items():
        if len(cuffs) != 3:
            raise AssertionError(f"pants {p} has degree {len(cuffs)}")
    for c, ends in surf.curves.items():
        if (len(ends) == 1) != (c in surf.frontier):
            raise AssertionError(f"curve {c} has dangling end")


# torus curves and levels


def _handle_side(surf: Surface, c: str) -> list[set[str]]:
    """Sides of ``c`` homeomorphic to a one-holed torus."""
    if c in surf.frontier or surf.is_loop(c):
        return []
    comp, groups = surf._cut(c)
    ends = surf.curves[c]
    ca, cb = comp[ends[0]], comp[ends[1]]
    if ca == cb:
        return []
    out = []
    for side in (ca, cb):
        if groups[side]:
            continue
        members = {p for p, k in comp.items() if k == side}
        if any(surf.legs[leg] in members for leg in surf.legs):
            continue
        inner = sum(
            1
            for d, e in surf.curves.items()
            if d != c and d not in surf.frontier and all(p in members for p in e)
        )
        genus = inner - len(members) + 1
        if genus == 1:
            out.append(members)
    return out


def torus_curves(surf: Surface) -> set[str]:
    """Base curves cutting off a one-holed torus, found by scanning every cut."""
    return {c for c in surf.curves if _handle_side(surf, c)}


def genus_zero_pants(surf: Surface) -> set[str]:
    """Pants of the genus-0 part left after removing every handle side."""
    handles: set[str] = set()
    for c in torus_curves(surf):
        for side in _handle_side(surf, c):
            handles |= side
    return set(surf.pants) - handles


@dataclass
class LevelSystem:
    surface: Surface
    gamma0: str
    vertices: frozenset[str]
    edges: dict[str, tuple[str, str]]
    levels: list[tuple[str, ...]]
    complete: int
    children: dict[str, tuple[str, ...]] = field(repr=False)

    @property
    def counts(self) -> list[int]:
        return [len(level) for level in self.levels]

    def level_of(self, c: str) -> int:
        for i, level in enumerate(self.levels):
            if c in level:
                return i
        raise KeyError(c)

    def descendants(self, c: str, level: int) -> tuple[str, ...]:
        """Edges of ``level`` reachable from ``c`` without crossing another edge of its level."""
        frontier = [c]
        here = self.level_of(c)
        for _ in range(level - here):
            frontier = [d for e in frontier for d in self.children.get(e, ())]
        return tuple(sorted(frontier, key=sort_key))


def level_system(surf: Surface, gamma0: str | None = None) -> LevelSystem:
    """Levels of separating curves by tree distance from ``gamma0`` in the genus-0 part."""
    v3 = genus_zero_pants(surf)
    e3 = {
        c: ends
        for c, ends in surf.curves.items()
        if c not in surf.frontier and len(set(ends)) == 2 and all(p in v3 for p in ends)
    }
    if gamma0 is None:
        if not e3:
            raise InvalidSurface("genus-0 part has no interior curve")
        gamma0 = "c0" if "c0" in e3 else min(e3, key=sort_key)
    if gamma0 not in e3:
        raise InvalidSurface(f"{gamma0} is not an edge of the genus-0 tree")
    # tree check
    if len(e3) != len(v3) - 1:
        raise AssertionError("genus-0 graph is not a tree")
    dist = {p: 0 for p in e3[gamma0]}
    queue = deque(e3[gamma0])
    adjacency: dict[str, list[tuple[str, str]]] = {p: [] for p in v3}
    for c, (p, q) in e3.items():
        adjacency[p].append((c, q))
        adjacency[q].append((c, p))
    level = {gamma0: 0}
    children: dict[str, list[str]] = {gamma0: []}
    via: dict[str, str] = {p: gamma0 for p in e3[gamma0]}
    while queue:
        p = queue.popleft()
        for c, q in adjacency[p]:
            if q in dist:
                continue
            dist[q] = dist[p] + 1
            level[c] = dist[p] + 1
            children.setdefault(via[p], []).append(c)
            children.setdefault(c, [])
            via[q] = c
            queue.append(q)
    if len(dist) != len(v3):
        raise AssertionError("genus-0 tree is disconnected")
    depth = max(level.values())
    levels = [tuple(sorted((c for c, i in level.items() if i == k), key=sort_key)) for k in range(depth + 1)]
    # levels at or past the first frontier curve may be missing members
    complete = len(levels)
    for f in surf.frontier:
        p = surf.curves[f][0]
        if p in dist:
            complete = min(complete, dist[p] + 1)
    return LevelSystem(
        surface=surf,
        gamma0=gamma0,
        vertices=frozenset(v3),
        edges=e3,
        levels=levels,
        complete=complete,
        children={k: tuple(v) for k, v in children.items()},
    )
