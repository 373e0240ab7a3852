"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the package's linear algebra and
enumeration code: dense Fraction elimination, determinantal divisors and
subset filtering over all ``2^m`` edge sets.
"""
from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from monocoh.graphcore import OrientedGraph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


# ---------------------------------------------------------------------------
# linear algebra oracles

def dense_rank(rows, p: int | None = None) -> int:
    """Rank by textbook Gaussian elimination over Q (or F_p)."""
    if p is None:
        a = [[Fraction(v) for v in r] for r in rows]
    else:
        a = [[v % p for v in r] for r in rows]
    if not a:
        return 0
    nr, nc = len(a), len(a[0])
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = (1 / a[r][c]) if p is None else pow(a[r][c], p - 2, p)
        for i in range(nr):
            if i != r and a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                if p is not None:
                    a[i] = [x % p for x in a[i]]
        r += 1
        if r == nr:
            break
    return r


def _det(m) -> int:
    m = [[Fraction(v) for v in r] for r in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return int(det)


def invariant_factors(rows) -> list[int]:
    """Smith invariants from determinantal divisors ``d_k = gcd of k x k minors``."""
    if not rows or not rows[0]:
        return []
    nr, nc = len(rows), len(rows[0])
    prev = 1
    out = []
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for ri in itertools.combinations(range(nr), k):
            for ci in itertools.combinations(range(nc), k):
                g = math.gcd(g, _det([[rows[i][j] for j in ci] for i in ri]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


# ---------------------------------------------------------------------------
# graph oracles

def all_orientations(g: OrientedGraph):
    for flips in range(1 << g.m):
        yield flips, g.flipped(flips)


def subsets_where(g: OrientedGraph, pred):
    return [mask for mask in range(1 << g.m) if pred(g, mask)]


def indegree_ok(g: OrientedGraph, mask: int) -> bool:
    ins = [0] * g.n
    for k, (_, t) in enumerate(g.edges):
        if (mask >> k) & 1:
            ins[t] += 1
    return all(d <= 1 for d in ins)


def multipath_ok(g: OrientedGraph, mask: int) -> bool:
    ins, outs = [0] * g.n, [0] * g.n
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for k, (s, t) in enumerate(g.edges):
        if (mask >> k) & 1:
            ins[t] += 1
            outs[s] += 1
            a, b = find(s), find(t)
            if a == b:
                return False
            parent[a] = b
    return max(ins, default=0) <= 1 and max(outs, default=0) <= 1


def connected_graphs(max_edges: int, max_vertices: int = 7):
    """All connected simple graphs (one orientation each) up to relabelling-free duplication."""
    for n in range(1, max_vertices + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for m in range(max(n - 1, 0), max_edges + 1):
            for chosen in itertools.combinations(pairs, m):
                g = OrientedGraph(n, chosen)
                if _connected(g):
                    yield g


def _connected(g: OrientedGraph) -> bool:
    if g.n == 0:
        return True
    seen = {0}
    stack = [0]
    adj = [[] for _ in range(g.n)]
    for s, t in g.edges:
        adj[s].append(t)
        adj[t].append(s)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def clique3():
    return OrientedGraph(3, ((0, 1), (1, 2), (0, 2)))


def brute_force_oh(u: OrientedGraph, base: int = 0, augmented: bool = False) -> dict:
    """Oriented homology from its definition: every flip set, every edge subset, dense ranks."""
    m = u.m
    gens = {}
    for flips in range(1 << m):
        g = u.flipped(base ^ flips)
        for s in range(1 << m):
            if (s or augmented) and indegree_ok(g, s):
                gens.setdefault(bin(s).count("1") - 1, {}).setdefault(bin(flips).count("1"), []).append((flips, s))
    out = {}
    for b, by_i in gens.items():
        ranks = {}
        for i in range(m):
            src, dst = by_i.get(i, []), by_i.get(i + 1, [])
            idx = {x: k for k, x in enumerate(dst)}
            rows = [[0] * len(src) for _ in dst]
            for col, (f, s) in enumerate(src):
                for e in range(m):
                    if not ((f | s) >> e) & 1:
                        rows[idx[(f | 1 << e, s)]][col] = (-1) ** bin(f & ((1 << e) - 1)).count("1")
            ranks[i] = dense_rank(rows) if rows and src else 0
        for i in range(m + 1):
            h = len(by_i.get(i, [])) - ranks.get(i, 0) - ranks.get(i - 1, 0)
            if h:
                out[(i, b)] = h
    return dict(sorted(out.items()))
