from collections import deque
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multicurve.farey import (
    INF,
    S04,
    S11,
    Slope,
    adjacent_slopes,
    all_slopes,
    farey_ball,
    farey_neighbors,
    is_farey_edge,
    minimal_intersection,
    slope_intersection,
    triangle_path,
)


@st.composite
def any_slope(draw):
    p = draw(st.integers(-40, 40))
    q = draw(st.integers(0, 40))
    if p == 0 and q == 0:
        q = 1
    return Slope(p, q)


def test_normalisation():
    assert Slope(2, 4) == Slope(1, 2)
    assert Slope(-1, -2) == Slope(1, 2)
    assert Slope(-3, 0) == INF
    assert str(Slope(-2, 6)) == "-1/3"
    with pytest.raises(ValueError):
        Slope(0, 0)


def test_parse():
    assert Slope.parse("inf") == INF
    assert Slope.parse("3") == Slope(3, 1)
    assert Slope.parse(" -2/5 ") == Slope(-2, 5)
    assert Slope.parse(Slope(1, 2)) == Slope(1, 2)
    assert Slope.parse(4) == Slope(4, 1)


def test_edges_by_determinant():
    assert is_farey_edge(Slope(0, 1), INF)
    assert is_farey_edge(Slope(1, 2), Slope(1, 3))
    assert not is_farey_edge(Slope(0, 1), Slope(2, 1))
    assert not is_farey_edge(Slope(1, 2), Slope(1, 2))


def test_brute_force_adjacency():
    bound = 7
    pool = list(all_slopes(bound))
    for a in pool:
        brute = {b for b in pool if abs(a.p * b.q - a.q * b.p) == 1}
        assert set(adjacent_slopes(a, bound)) == brute, a


def test_all_slopes_reduced_and_unique():
    pool = list(all_slopes(6))
    assert len(pool) == len(set(pool))
    assert all(gcd(s.p, s.q) == 1 for s in pool)


@given(any_slope(), any_slope())
def test_neighbors_complete_triangles(a, b):
    if not is_farey_edge(a, b):
        with pytest.raises(ValueError):
            farey_neighbors(a, b)
        return
    x, y = farey_neighbors(a, b)
    assert x != y
    for s in (x, y):
        assert is_farey_edge(a, s) and is_farey_edge(b, s)


def _dual_bfs(a, b, bound):
    """Shortest triangle chain by BFS in the dual tree restricted to height ``bound``."""
    start = [frozenset((a, x, y)) for x in adjacent_slopes(a, bound) for y in adjacent_slopes(a, bound)
             if is_farey_edge(x, y)]
    dist = {t: 1 for t in start}
    queue = deque(start)
    while queue:
        t = queue.popleft()
        if b in t:
            return dist[t]
        u, v, w = sorted(t)
        for e, opp in (((u, v), w), ((v, w), u), ((u, w), v)):
            n1, n2 = farey_neighbors(*e)
            other = n2 if n1 == opp else n1
            if other.height > bound:
                continue
            nt = frozenset((e[0], e[1], other))
            if nt not in dist:
                dist[nt] = dist[t] + 1
                queue.append(nt)
    return None


@settings(max_examples=40, deadline=None)
@given(any_slope(), any_slope())
def test_triangle_path_is_shortest(a, b):
    chain = triangle_path(a, b)
    assert a in chain[0] and b in chain[-1]
    assert all(len(s & t) == 2 for s, t in zip(chain, chain[1:]))
    for t in chain:
        u, v, w = t
        assert is_farey_edge(u, v) and is_farey_edge(v, w) and is_farey_edge(u, w)
    bound = max(s.height for t in chain for s in t)
    assert _dual_bfs(a, b, bound) == len(chain)


def test_triangle_path_simple():
    assert len(triangle_path(INF, Slope(0, 1))) == 1
    assert len(triangle_path(INF, Slope(1, 2))) == 2


def test_ball_is_induced_subgraph():
    ball = farey_ball(INF, 2, 4)
    assert INF in ball
    for a, nbrs in ball.items():
        for b in nbrs:
            assert is_farey_edge(a, b)
            assert a in ball[b]


def test_intersections():
    assert slope_intersection(S11, INF, Slope(0, 1)) == 1
    assert slope_intersection(S04, INF, Slope(0, 1)) == 2
    assert slope_intersection(S11, Slope(1, 2), Slope(2, 1)) == 3
    assert minimal_intersection(S11) == 1
    assert minimal_intersection(S04) == 2
    with pytest.raises(ValueError):
        slope_intersection("S22", INF, INF)
