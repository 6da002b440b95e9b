"""Stand-alone checker for path certificates.

Everything is recomputed from the JSON document: the dual graph, the metric,
collar widths, separators, levels and chart-curve length bounds.  Nothing
here imports the code that built the certificate.
"""

from __future__ import annotations

import math
import re
from collections import deque
from math import gcd

_ID = re.compile(r"^([A-Za-z]+)(-?\d+)$")
_OUT = "outside:"


class Reject(Exception):
    pass


def _require(cond, clause, msg):
    if not cond:
        raise Reject(f"{clause}: {msg}")


# geometry


def _collar(l):
    return math.asinh(1.0 / math.sinh(l / 2.0))


def _perp(lengths, i, j):
    k = 3 - i - j
    a, b, c = lengths[i] / 2, lengths[j] / 2, lengths[k] / 2
    return math.acosh((math.cosh(c) + math.cosh(a) * math.cosh(b)) / (math.sinh(a) * math.sinh(b)))


class _Graph:
    def __init__(self, doc):
        self.pants = {p: tuple(cs) for p, cs in doc["pants"].items()}
        self.curves = {c: tuple(es) for c, es in doc["curves"].items()}
        self.frontier = dict(doc.get("frontier", {}))
        self.kind = doc["surface"]["kind"]
        for p, cs in self.pants.items():
            _require(len(cs) == 3, "graph", f"pants {p} is not trivalent")
        for c, es in self.curves.items():
            for p in es:
                _require(c in self.pants[p], "graph", f"{c} does not bound {p}")

    def inner(self, c):
        return c in self.curves and c not in self.frontier

    def ends(self, c):
        return list(dict.fromkeys(self.curves[c]))

    def loop(self, c):
        es = self.curves[c]
        return len(es) == 2 and es[0] == es[1]

    def sisters(self, c):
        out = set()
        for p in self.ends(c):
            out |= {x for x in self.pants[p] if x in self.curves}
        out.discard(c)
        return out

    def reach(self, starts, blocked):
        """Pants reachable from ``starts`` without crossing ``blocked``, and ends met."""
        seen = set(starts)
        groups = set()
        todo = deque(starts)
        while todo:
            p = todo.popleft()
            for c in self.pants[p]:
                if c not in self.curves or c == blocked:
                    continue
                if c in self.frontier:
                    groups.add(self.frontier[c])
                    continue
                for q in self.curves[c]:
                    if q not in seen:
                        seen.add(q)
                        todo.append(q)
        return seen, groups

    def separated(self, a, b, d):
        sa, ga = self.reach(self.ends(a), d)
        if any(p in sa for p in self.ends(b)):
            return False
        _, gb = self.reach(self.ends(b), d)
        if ga & gb:
            raise Reject(f"levels: separation by {d} is not decided inside the window")
        return True


class _Lengths:
    def __init__(self, doc):
        self.M = float(doc["M"])
        self.fixed = {k: float(v) for k, v in doc.get("lengths", {}).items()}
        self.fam = {k: float(v) for k, v in doc.get("periodic", {}).items()}

    def __call__(self, c):
        if c in self.fixed:
            return self.fixed[c]
        m = _ID.match(c)
        if m and m.group(1) in self.fam:
            return self.fam[m.group(1)]
        raise Reject(f"metric: no length for {c}")


def _slope(text):
    if "/" in text:
        p, q = (int(x) for x in text.split("/"))
    else:
        p, q = int(text), 1
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    g = gcd(p, q) or 1
    return p // g, q // g


def _curve(text):
    if "@" in text:
        c, s = text.split("@")
        return c, _slope(s)
    return text, None


def _chart_bound(G, ln, c, s):
    p, q = s
    if q == 0:
        return ln(c)
    ends = G.ends(c)
    crossings = q if len(ends) == 1 else 2 * q
    arc = 0.0
    for P in ends:
        cuffs = G.pants[P]
        lens = [ln(x) for x in cuffs]
        i = cuffs.index(c)
        for j in range(3):
            if j != i:
                arc = max(arc, 2 * _perp(lens, i, j) + lens[j] / 2)
    return crossings * (arc + ln(c)) + abs(p) * ln(c)


# vertices


class _Vertex:
    def __init__(self, G, ln, doc, name):
        self.name = name
        self.records = {}
        for r in doc["records"]:
            c = r["curve"]
            _require(c not in self.records, name, f"{c} listed twice")
            self.records[c] = r
        _require(self.records, name, "empty multicurve")
        self.tail_complexity = doc.get("tail_complexity", 0)
        self.tail_length = float(doc.get("tail_length", 0.0))
        self.G, self.ln = G, ln
        self.charts = {}
        self.bases = set()
        for c in self.records:
            chart, s = _curve(c)
            _require(chart in G.curves, name, f"{c} is not on the window")
            if s is None or s[1] == 0:
                self.bases.add(chart)
            else:
                _require(chart not in self.charts, name, f"two curves in chart {chart}")
                self.charts[chart] = s

    def check_multicurve(self):
        G = self.G
        clause = self.name
        for c in self.charts:
            _require(G.inner(c), clause, f"excited chart {c} reaches outside the window")
            _require(c not in self.bases, clause, f"{c} and a curve of its chart both present")
            for d in G.sisters(c):
                _require(d not in self.charts, clause, f"sister charts {c} and {d}")

    def check_records(self):
        G, ln = self.G, self.ln
        for c, r in self.records.items():
            chart, s = _curve(c)
            window = set(G.ends(chart))
            if chart in G.frontier:
                window.add(_OUT + G.frontier[chart])
            crossing = set() if chart not in self.charts else {chart}
            _require(set(r["window"]) == window, self.name, f"window of {c}")
            _require(set(r["crossings"]) == crossing, self.name, f"crossings of {c}")
            need = ln(chart) if chart not in self.charts else _chart_bound(G, ln, chart, self.charts[chart])
            _require(float(r["length_upper"]) >= need - 1e-9, "L", f"length bound of {c} below its geodesic bound")

    def Lsup(self):
        return max([float(r["length_upper"]) for r in self.records.values()] + [self.tail_length])

    def complement(self):
        """``(complexity, open)`` for each complementary component in the window."""
        G = self.G
        halves = {}
        for c, (p, q) in self.charts.items():
            ends = G.ends(c)
            if len(ends) == 1:
                halves[c] = [(f"{c}#0", [x for x in G.pants[ends[0]] if x != c])]
                continue
            b = [x for P in ends for x in _without(G.pants[P], c)]
            if p % 2 == 0:
                pairs = ((0, 2), (1, 3))
            elif q % 2 == 0:
                pairs = ((0, 1), (2, 3))
            else:
                pairs = ((0, 3), (1, 2))
            halves[c] = [(f"{c}#{k}", [b[i], b[j]]) for k, (i, j) in enumerate(pairs)]
        owner = {}
        cuffs = {}
        in_chart = {P for c in self.charts for P in G.ends(c)}
        for P in G.pants:
            if P not in in_chart:
                cuffs[P] = list(G.pants[P])
        for c, hs in halves.items():
            for n, cs in hs:
                cuffs[n] = cs
        for n, cs in cuffs.items():
            for x in cs:
                if x in G.curves:
                    owner.setdefault(x, []).append(n)
        missing = [c for c in G.curves if c not in self.charts and c not in self.bases]
        parent = {n: n for n in cuffs}

        def find(n):
            while parent[n] != n:
                parent[n] = parent[parent[n]]
                n = parent[n]
            return n

        for c in missing:
            ns = owner[c]
            for n in ns[1:]:
                parent[find(n)] = find(ns[0])
        comps = {}
        for c in missing:
            root = find(owner[c][0])
            k, o = comps.get(root, (0, False))
            comps[root] = (k + 1, o or c in G.frontier)
        return list(comps.values())

    def Ksup(self):
        best = 0
        for k, opened in self.complement():
            if opened:
                t = self.tail_complexity
                _require(t is not None, "complement", f"{self.name}: open component of unknown complexity")
                _require(isinstance(t, (int, float)) and t >= 0 and math.isfinite(t), "complement", f"{self.name}: tail complexity {t}")
                k += t
            best = max(best, k)
        return best

    def windows(self):
        out = set()
        for r in self.records.values():
            out |= set(r["window"])
        return out


def _without(cuffs, c):
    cs = list(cuffs)
    cs.remove(c)
    return cs


def _union_ok(a, b):
    for x, y in ((a, b), (b, a)):
        for c, s in x.charts.items():
            if c in y.charts and y.charts[c] != s:
                return False
            if c in y.bases:
                return False
            if any(d in y.charts for d in x.G.sisters(c)):
                return False
    return True


# levels


def _levels(G, gamma0):
    v3 = {P for P, cs in G.pants.items() if len(set(cs)) == 3}
    e3 = {c: tuple(G.ends(c)) for c in G.curves if G.inner(c) and len(G.ends(c)) == 2 and all(P in v3 for P in G.ends(c))}
    _require(gamma0 in e3, "levels", f"{gamma0} is not a separating tree edge")
    dist = {P: 0 for P in e3[gamma0]}
    level = {gamma0: 0}
    parent = {}
    todo = deque(e3[gamma0])
    up = {P: gamma0 for P in e3[gamma0]}
    while todo:
        P = todo.popleft()
        for c, (x, y) in e3.items():
            if P not in (x, y):
                continue
            Q = y if x == P else x
            if Q in dist:
                continue
            dist[Q] = dist[P] + 1
            level[c] = dist[Q]
            parent[c] = up[P]
            up[Q] = c
            todo.append(Q)
    complete = max(level.values()) + 1
    for f in G.frontier:
        P = G.curves[f][0]
        if P in dist:
            complete = min(complete, dist[P] + 1)
    return level, parent, complete


def _descends(parent, a, b):
    while b in parent:
        b = parent[b]
        if b == a:
            return True
    return False


# top level


def verify_certificate(cert: dict):
    """``(True, "ok")`` if every clause of the certificate checks, else ``(False, reason)``."""
    try:
        _verify(cert)
    except Reject as exc:
        return False, str(exc)
    except (AttributeError, KeyError, TypeError, ValueError) as exc:
        return False, f"format: {exc!r}"
    return True, "ok"


def _verify(cert):
    _require(isinstance(cert, dict), "format", "certificate is not a JSON object")
    _require(cert.get("format") == "ginf-path/1", "format", "unknown certificate format")
    G = _Graph(cert["dual_graph"])
    ln = _Lengths(cert["metric"])
    for c in G.curves:
        _require(0 < ln(c) <= ln.M, "metric", f"length of {c} outside (0, M]")
    eps = float(cert.get("epsilon", 1e-9))
    L = float(cert["L"])
    path = [_Vertex(G, ln, d, f"path[{i}]") for i, d in enumerate(cert["path"])]
    for x in path:
        x.check_multicurve()
        x.check_records()
        _require(math.isfinite(x.Lsup()), "L", f"{x.name} has unbounded lengths")
        _require(x.Lsup() <= L + eps, "L", f"{x.name} has a curve longer than L")
        x.Ksup()
    kind = cert["kind"]
    if kind == "trivial":
        _require(len(path) == 1, "path", "trivial path must have one vertex")
        return
    if kind == "edge":
        _require(len(path) == 2, "path", "edge path must have two vertices")
        _require(_union_ok(path[0], path[1]), "edge", "endpoints are not disjoint")
        return
    _require(kind == "full", "format", f"unknown path kind {kind}")
    _require(len(path) == 4, "path", "full path must have four vertices")
    mu, vh, wh, nu = path
    comp = {k: _Vertex(G, ln, d, k) for k, d in cert["completions"].items()}
    v, w = comp["v"], comp["w"]
    for x in (v, w):
        x.check_multicurve()
        x.check_records()
        have = x.bases | set(x.charts)
        _require(have == set(G.curves), x.name, "completion is not a full pants decomposition")
        _require(x.Lsup() <= L + eps, "L", f"{x.name} has a curve longer than L")
    for small, big in ((mu, v), (vh, v), (wh, w), (nu, w)):
        _require(set(small.records) <= set(big.records), "path", f"{small.name} is not inside {big.name}")
    _require(_union_ok(vh, wh), "edge", "middle vertices intersect")

    lv = cert["levels"]
    level, parent, complete = _levels(G, lv["gamma0"])
    sel = [int(i) for i in lv["selected"]]
    _require(len(sel) >= 2 and sel[0] == 0 and sel == sorted(set(sel)), "levels", "bad selection")
    _require(sel[-1] < complete, "levels", "selected level reaches the frontier")
    members = {i: sorted(c for c, k in level.items() if k == i) for i in sel}
    for i in sel:
        _require(sorted(lv["curves"][str(i)]) == members[i], "levels", f"level {i} is incomplete")
    for a, b in zip(sel, sel[1:]):
        for g in members[a]:
            for g2 in members[b]:
                if not _descends(parent, g, g2):
                    continue
                lower = sum(
                    2 * _collar(ln(d))
                    for d in G.curves
                    if G.inner(d) and d not in (g, g2) and G.separated(g, g2, d)
                )
                _require(lower - eps > L, "(3)", f"d({g},{g2}) >= {lower:.6g} does not exceed L={L:.6g}")

    sup = cert["supports"]
    for name, x in (("v", v), ("w", w)):
        for i in sel:
            for g in members[i]:
                S = set(sup[name][g])
                _require(set(G.ends(g)) <= S, "support", f"{name} support of {g} misses {g}")
                for c, r in x.records.items():
                    if g in r["crossings"]:
                        _require(set(r["window"]) <= S, "support", f"{name} support of {g} misses {c}")
    region = {}
    for name, parity in (("v", 0), ("w", 1)):
        region[name] = set()
        for j, i in enumerate(sel):
            if j % 2 == parity:
                for g in members[i]:
                    region[name] |= set(sup[name][g])
    _require(not region["v"] & region["w"], "disjoint", "supports of alternate levels overlap")
    _require(vh.windows() <= region["v"], "half", "v' has a curve outside its supports")
    _require(wh.windows() <= region["w"], "half", "w' has a curve outside its supports")
