"""Exact arithmetic on the Farey graph.

Slopes are reduced fractions ``p/q`` with ``q >= 0``; ``1/0`` is the point at
infinity.  Two slopes are adjacent when ``|p*t - q*s| == 1``.  Triangles are
frozensets of three pairwise adjacent slopes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator

from .errors import NotAnEdge

__all__ = [
    "Slope",
    "INF",
    "is_farey_edge",
    "farey_neighbors",
    "adjacent_slopes",
    "farey_ball",
    "triangle_path",
    "slope_intersection",
    "S11",
    "S04",
]

S11 = "S11"
S04 = "S04"


@dataclass(frozen=True, order=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a slope")
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        g = gcd(p, q)
        p, q = p // g, q // g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def parse(cls, text: str | int | "Slope") -> "Slope":
        if isinstance(text, Slope):
            return text
        if isinstance(text, int):
            return cls(text, 1)
        text = text.strip()
        if text in ("inf", "oo", "∞"):
            return INF
        if "/" in text:
            p, q = text.split("/")
            return cls(int(p), int(q))
        return cls(int(text), 1)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    @property
    def height(self) -> int:
        return max(abs(self.p), self.q)

    def __str__(self):
        return f"{self.p}/{self.q}"

    def __repr__(self):
        return f"Slope({self.p}/{self.q})"


INF = Slope(1, 0)


def _det(a: Slope, b: Slope) -> int:
    return a.p * b.q - a.q * b.p


def is_farey_edge(a: Slope, b: Slope) -> bool:
    return abs(_det(a, b)) == 1


def farey_neighbors(a: Slope, b: Slope) -> tuple[Slope, Slope]:
    """Return the two slopes completing the edge ``a b`` to a triangle.

    One of them is the mediant ``(p+s)/(q+t)``, the other ``(p-s)/(q-t)``.
    The pair is returned sorted, so it does not depend on the order of the
    arguments.
    """
    if not is_farey_edge(a, b):
        raise NotAnEdge(f"{a} and {b} are not Farey-adjacent")
    plus = Slope(a.p + b.p, a.q + b.q)
    minus = Slope(a.p - b.p, a.q - b.q)
    return tuple(sorted((plus, minus)))  # type: ignore[return-value]


def _extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        k, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    return a, x0, y0


def _to_infinity(a: Slope) -> tuple[int, int, int, int]:
    """Integer matrix (x, y, z, w) of determinant 1 sending ``a`` to 1/0."""
    # Find r, s with p*s - r*q = 1; then [[p, r], [q, s]] sends 1/0 to p/q.
    _, x, y = _extended_gcd(abs(a.p), a.q)
    # |p|*x + q*y = 1
    if a.p >= 0:
        s, r = x, -y
    else:
        s, r = -x, -y
        # p*s - r*q = (-|p|)(-x) + y*q = 1
    assert a.p * s - r * a.q == 1
    return s, -r, -a.q, a.p


def _apply(m: tuple[int, int, int, int], a: Slope) -> Slope:
    x, y, z, w = m
    return Slope(x * a.p + y * a.q, z * a.p + w * a.q)


def _invert(m: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    x, y, z, w = m
    return w, -y, -z, x


def adjacent_slopes(a: Slope, bound: int) -> list[Slope]:
    """All Farey neighbours of ``a`` with height at most ``bound``, sorted."""
    if a.is_infinite:
        return [Slope(n, 1) for n in range(-bound, bound + 1)]
    # Neighbours of infinity are the integers, so neighbours of a are their
    # images under a matrix sending infinity to a.
    inv = _invert(_to_infinity(a))
    out = set()
    # images of n/1 have height >= |n| - a.height
    limit = bound + a.height + 1
    for n in range(-limit, limit + 1):
        s = _apply(inv, Slope(n, 1))
        if s.height <= bound:
            out.add(s)
    return sorted(out)


def farey_ball(center: Slope, depth: int, bound: int) -> dict[Slope, set[Slope]]:
    """Radius-``depth`` ball around ``center`` in the height-``bound`` Farey graph.

    Returns an adjacency map of the induced subgraph on the ball.
    """
    if center.height > bound:
        raise ValueError("center exceeds the height bound")
    dist = {center: 0}
    queue = deque([center])
    while queue:
        x = queue.popleft()
        if dist[x] == depth:
            continue
        for y in adjacent_slopes(x, bound):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    adj: dict[Slope, set[Slope]] = {x: set() for x in dist}
    for x in dist:
        for y in adjacent_slopes(x, bound):
            if y in dist:
                adj[x].add(y)
    return adj


Triangle = frozenset


def _descend(target: Slope) -> Iterator[frozenset]:
    """Triangles met by the vertical geodesic from infinity down to ``target``."""
    if target.is_infinite:
        yield frozenset((INF, Slope(0, 1), Slope(1, 1)))
        return
    p, q = target.p, target.q
    n = p // q  # floor
    left, right = Slope(n, 1), Slope(n + 1, 1)
    yield frozenset((INF, left, right))
    if q == 1:
        return
    while True:
        mid = Slope(left.p + right.p, left.q + right.q)
        yield frozenset((left, right, mid))
        if mid == target:
            return
        if target.p * mid.q < mid.p * target.q:
            right = mid
        else:
            left = mid


def triangle_path(a: Slope, b: Slope) -> list[frozenset]:
    """Shortest chain of Farey triangles from one containing ``a`` to one containing ``b``.

    Consecutive triangles share an edge.  The chain is the path in the dual tree
    crossed by the hyperbolic geodesic from ``a`` to ``b``.
    """
    m = _to_infinity(a)
    inv = _invert(m)
    image = _apply(m, b)
    chain = list(_descend(image))
    return [frozenset(_apply(inv, s) for s in tri) for tri in chain]


def slope_intersection(kind: str, a: Slope, b: Slope) -> int:
    """Geometric intersection of the curves of slopes ``a`` and ``b``.

    One-holed torus charts give ``|pt - qs|``, four-holed sphere charts twice that.
    """
    d = abs(_det(a, b))
    if kind == S11:
        return d
    if kind == S04:
        return 2 * d
    raise ValueError(f"unknown chart kind {kind!r}")


def minimal_intersection(kind: str) -> int:
    return 1 if kind == S11 else 2


def all_slopes(bound: int) -> Iterable[Slope]:
    """Every reduced slope of height at most ``bound`` (including infinity)."""
    yield INF
    for q in range(1, bound + 1):
        for p in range(-bound, bound + 1):
            if gcd(p, q) == 1:
                yield Slope(p, q)
