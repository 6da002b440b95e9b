"""Upper-bounded Fenchel-Nielsen metrics and certified distance bounds.

Distances are never computed exactly; every function returns a number that
is a sound lower or upper bound for the quantity it names.  Threshold
comparisons apply the slack ``EPS`` on the sound side.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import Undetermined
from .farey import INF, Slope, slope_intersection
from .surface import Surface, split_id

EPS = 1e-9


def collar_width(l: float) -> float:
    """Half-width of the standard embedded collar around a geodesic of length ``l``."""
    if not l > 0:
        raise ValueError("collar width needs a positive length")
    return math.asinh(1.0 / math.sinh(l / 2.0))


def cuff_distance(l1: float, l2: float, l3: float, i: int, j: int) -> float:
    """Distance between cuffs ``i`` and ``j`` of a pants with cuff lengths ``l1, l2, l3``."""
    lengths = (l1, l2, l3)
    if i == j or {i, j} - {0, 1, 2}:
        raise ValueError("need two distinct cuff indices in 0..2")
    if min(lengths) <= 0:
        raise ValueError("degenerate cuff lengths")
    (k,) = {0, 1, 2} - {i, j}
    hi, hj, hk = (lengths[x] / 2.0 for x in (i, j, k))
    c = (math.cosh(hk) + math.cosh(hi) * math.cosh(hj)) / (math.sinh(hi) * math.sinh(hj))
    return math.acosh(c)


@dataclass
class FNMetric:
    """Per-curve lengths (and unused twists) realizing an upper-bounded metric.

    ``periodic`` gives a default length per id family (``a``, ``t``, ``c``,
    ``L`` for boundary legs); it also describes the metric beyond a window.
    """

    M: float
    lengths: dict[str, float] = field(default_factory=dict)
    twists: dict[str, float] = field(default_factory=dict)
    periodic: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError("M must be positive")
        for name, l in list(self.lengths.items()) + list(self.periodic.items()):
            if not 0 < l <= self.M:
                raise ValueError(f"length of {name} must lie in (0, M]")

    @classmethod
    def uniform(cls, length: float, M: float) -> "FNMetric":
        return cls(M=M, periodic={f: length for f in ("a", "t", "c", "L")})

    def length(self, c: str) -> float:
        if c in self.lengths:
            return self.lengths[c]
        fam, _ = split_id(c)
        if fam in self.periodic:
            return self.periodic[fam]
        raise KeyError(f"no length for {c}")

    @property
    def sup_length(self) -> float:
        vals = list(self.lengths.values()) + list(self.periodic.values())
        return max(vals)

    def scaled(self, factor: float) -> "FNMetric":
        return FNMetric(
            M=self.M * factor,
            lengths={k: v * factor for k, v in self.lengths.items()},
            twists=dict(self.twists),
            periodic={k: v * factor for k, v in self.periodic.items()},
        )

    def check_surface(self, surf: Surface):
        for c in list(surf.curves) + list(surf.legs):
            self.length(c)

    def to_json(self) -> dict:
        out = {"M": self.M, "lengths": dict(sorted(self.lengths.items())), "twists": dict(sorted(self.twists.items()))}
        if self.periodic:
            out["periodic"] = dict(sorted(self.periodic.items()))
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "FNMetric":
        return cls(
            M=float(data["M"]),
            lengths={k: float(v) for k, v in data.get("lengths", {}).items()},
            twists={k: float(v) for k, v in data.get("twists", {}).items()},
            periodic={k: float(v) for k, v in data.get("periodic", {}).items()},
        )


@dataclass
class DistanceBound:
    lower: float
    upper: float
    separators: list[str] = field(default_factory=list)
    path: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.lower > self.upper + EPS:
            raise AssertionError("lower bound exceeds upper bound")


def _pants_lengths(surf: Surface, m: FNMetric, p: str) -> tuple[float, float, float]:
    return tuple(m.length(x) for x in surf.pants[p])  # type: ignore[return-value]


def _cuff_pair(cuffs: tuple, x: str, y: str) -> tuple[int, int]:
    i = cuffs.index(x)
    j = next(k for k, z in enumerate(cuffs) if z == y and k != i)
    return i, j


def pants_cuff_distance(surf: Surface, m: FNMetric, p: str, x: str, y: str) -> float:
    cuffs = surf.pants[p]
    i, j = _cuff_pair(cuffs, x, y)
    return cuff_distance(*_pants_lengths(surf, m, p), i, j)


def dist_lower(surf: Surface, m: FNMetric, a: str, b: str) -> float:
    """Sum of full collar widths of the base curves separating ``a`` from ``b``."""
    if a == b:
        raise ValueError("distinct curves required")
    return sum(2.0 * collar_width(m.length(d)) for d in surf.separators(a, b))


def dist_upper(surf: Surface, m: FNMetric, a: str, b: str) -> float:
    """Length of a concrete path: cuff perpendiculars along a shortest pants path.

    Between consecutive perpendiculars the path runs at most half way around
    the shared curve.
    """
    if a == b:
        raise ValueError("distinct curves required")
    if a in surf.frontier or b in surf.frontier:
        raise Undetermined("frontier curve")
    total = 0.0
    steps = surf.dual_path(a, b)
    for n, (p, entry, exit_) in enumerate(steps):
        total += pants_cuff_distance(surf, m, p, entry, exit_)
        if n + 1 < len(steps):
            total += m.length(exit_) / 2.0
    return total


def distance_bound(surf: Surface, m: FNMetric, a: str, b: str) -> DistanceBound:
    seps = surf.separators(a, b)
    lower = sum(2.0 * collar_width(m.length(d)) for d in seps)
    steps = surf.dual_path(a, b)
    upper = dist_upper(surf, m, a, b)
    return DistanceBound(lower, upper, seps, [p for p, _, _ in steps])


def crossing_support_bound(m: FNMetric, gamma: str, Lbound: float) -> int:
    """Most times a curve of length ``<= Lbound`` can cross ``gamma`` essentially.

    Each crossing traverses the whole collar of ``gamma``.
    """
    return math.floor(Lbound / (2.0 * collar_width(m.length(gamma))) + EPS)


def chart_arc_bound(surf: Surface, m: FNMetric, c: str) -> float:
    """Upper bound for an essential arc from ``c`` back to ``c`` inside its chart.

    Go perpendicular to another cuff, around half of it, and back.
    """
    best = 0.0
    for p in surf.chart_pants(c):
        cuffs = surf.pants[p]
        i = cuffs.index(c)
        lengths = _pants_lengths(surf, m, p)
        for j, x in enumerate(cuffs):
            if j == i:
                continue
            d = cuff_distance(*lengths, i, j)
            best = max(best, 2.0 * d + lengths[j] / 2.0)
    return best


def chart_curve_length_bound(surf: Surface, m: FNMetric, c: str, s: Slope) -> float:
    """Conservative length bound for the chart curve of slope ``s`` in the chart of ``c``.

    The curve is homotopic to ``i`` arcs across the chart (``i`` its
    intersection with ``c``), joined along ``c``, plus ``|p|`` turns around ``c``.
    """
    if s == INF:
        return m.length(c)
    kind = surf.chart_kind(c)
    crossings = slope_intersection(kind, s, INF)
    lc = m.length(c)
    return crossings * (chart_arc_bound(surf, m, c) + lc) + abs(s.p) * lc


def bounds_table(surf: Surface, m: FNMetric, pairs: Iterable[tuple[str, str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "b", "lower", "upper", "separators"])
    for a, b in pairs:
        try:
            bd = distance_bound(surf, m, a, b)
        except Undetermined:
            w.writerow([a, b, "", "", "UNDETERMINED"])
            continue
        w.writerow([a, b, f"{bd.lower:.12g}", f"{bd.upper:.12g}", " ".join(bd.separators)])
    return buf.getvalue()
