"""Oriented graphs, degree data, free-flow orientations and graph transforms.

Vertices are dense integers ``0..n-1``; their order is the vertex order used
everywhere else (component ordering, tensor bases).  Names are kept only for
input/output.
"""
from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

__all__ = [
    "GraphFormatError",
    "OrientedGraph",
    "Orientation",
    "GraphReport",
    "EdgeBijection",
    "parse_graph",
    "load_graph",
    "format_graph",
    "components",
    "analyze",
    "is_free_flow",
    "free_flow_by_definition",
    "enumerate_free_flow",
    "brute_force_free_flow",
    "source_resolution",
    "coherent_barycentric",
    "barycentric_digraph",
    "disjoint_union",
    "relabel",
    "canonical_form",
    "isomorphic",
    "random_digraph",
    "path_graph",
    "cycle_graph",
    "complete_bipartite",
]


class GraphFormatError(ValueError):
    pass


@dataclass(frozen=True)
class OrientedGraph:
    n: int
    edges: tuple[tuple[int, int], ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        edges = tuple((int(s), int(t)) for s, t in self.edges)
        object.__setattr__(self, "edges", edges)
        if not self.names:
            object.__setattr__(self, "names", tuple(f"v{i}" for i in range(self.n)))
        elif len(self.names) != self.n:
            raise GraphFormatError(f"{len(self.names)} names for {self.n} vertices")
        seen = set()
        for s, t in edges:
            if not (0 <= s < self.n and 0 <= t < self.n):
                raise GraphFormatError(f"edge ({s}, {t}) has an endpoint outside 0..{self.n - 1}")
            if s == t:
                raise GraphFormatError(f"loop at vertex {self.names[s]}")
            if (s, t) in seen:
                raise GraphFormatError(f"duplicate edge {self.names[s]} -> {self.names[t]}")
            if (t, s) in seen:
                raise GraphFormatError(f"both orientations of {{{self.names[s]}, {self.names[t]}}} present")
            seen.add((s, t))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n: int | None = None) -> "OrientedGraph":
        edges = tuple(edges)
        if n is None:
            n = 1 + max((max(e) for e in edges), default=-1)
        return cls(n, edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def source(self, e: int) -> int:
        return self.edges[e][0]

    def target(self, e: int) -> int:
        return self.edges[e][1]

    def indegrees(self, mask: int | None = None) -> list[int]:
        deg = [0] * self.n
        for k, (_, t) in enumerate(self.edges):
            if mask is None or (mask >> k) & 1:
                deg[t] += 1
        return deg

    def outdegrees(self, mask: int | None = None) -> list[int]:
        deg = [0] * self.n
        for k, (s, _) in enumerate(self.edges):
            if mask is None or (mask >> k) & 1:
                deg[s] += 1
        return deg

    def flipped(self, flips: int) -> "OrientedGraph":
        """Same underlying graph with the edges in ``flips`` reversed."""
        edges = tuple((t, s) if (flips >> k) & 1 else (s, t) for k, (s, t) in enumerate(self.edges))
        return OrientedGraph(self.n, edges, self.names)

    def subgraph(self, mask: int) -> "OrientedGraph":
        """Spanning subgraph on the edges in ``mask`` (edge order kept)."""
        return OrientedGraph(self.n, tuple(e for k, e in enumerate(self.edges) if (mask >> k) & 1), self.names)

    def edge_label(self, e: int) -> str:
        s, t = self.edges[e]
        return f"{self.names[s]}->{self.names[t]}"

    def __repr__(self) -> str:
        return f"OrientedGraph(n={self.n}, edges={list(self.edges)})"


@dataclass(frozen=True)
class Orientation:
    """An orientation of ``base``'s underlying graph, as the set of reversed edges."""

    base: OrientedGraph
    flips: int = 0

    def graph(self) -> OrientedGraph:
        return self.base.flipped(self.flips)

    @property
    def hamming(self) -> int:
        return bin(self.flips).count("1")

    def distance(self, other: "Orientation") -> int:
        return bin(self.flips ^ other.flips).count("1")


@dataclass(frozen=True)
class GraphReport:
    indegree: tuple[int, ...]
    outdegree: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]
    classes: tuple[str, ...]
    is_free_flow: bool
    is_alternating: bool

    def as_dict(self, names: Sequence[str] | None = None) -> dict:
        nm = (lambda v: names[v]) if names else (lambda v: v)
        return {
            "indegree": {str(nm(v)): d for v, d in enumerate(self.indegree)},
            "outdegree": {str(nm(v)): d for v, d in enumerate(self.outdegree)},
            "components": [[nm(v) for v in c] for c in self.components],
            "classes": list(self.classes),
            "is_free_flow": self.is_free_flow,
            "is_alternating": self.is_alternating,
        }


@dataclass(frozen=True)
class EdgeBijection:
    forward: tuple[int, ...]
    backward: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.backward:
            back = [0] * len(self.forward)
            for k, v in enumerate(self.forward):
                back[v] = k
            object.__setattr__(self, "backward", tuple(back))


# ---------------------------------------------------------------------------
# text format

def parse_graph(text: str) -> OrientedGraph:
    """Parse the line format: ``v <name>``, ``e <src> <tgt>``, ``# comment``."""
    names: list[str] = []
    index: dict[str, int] = {}
    edges: list[tuple[int, int]] = []

    def vid(name: str) -> int:
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) == 2:
            if parts[1] in index:
                raise GraphFormatError(f"line {lineno}: vertex {parts[1]!r} declared twice")
            vid(parts[1])
        elif parts[0] == "e" and len(parts) == 3:
            edges.append((vid(parts[1]), vid(parts[2])))
        else:
            raise GraphFormatError(f"line {lineno}: cannot parse {raw.strip()!r}")
    try:
        return OrientedGraph(len(names), tuple(edges), tuple(names))
    except GraphFormatError as exc:
        raise GraphFormatError(f"invalid graph: {exc}") from None


def load_graph(path: str | Path) -> OrientedGraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def format_graph(g: OrientedGraph) -> str:
    lines = [f"v {name}" for name in g.names]
    lines += [f"e {g.names[s]} {g.names[t]}" for s, t in g.edges]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# structure

class _DSU:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        self.parent[rb] = ra  # root = minimal vertex
        return True


def components(g: OrientedGraph, mask: int | None = None) -> list[list[int]]:
    """Components of the spanning subgraph on ``mask``, ordered by minimal vertex."""
    dsu = _DSU(g.n)
    for k, (s, t) in enumerate(g.edges):
        if mask is None or (mask >> k) & 1:
            dsu.union(s, t)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(dsu.find(v), []).append(v)
    return [groups[r] for r in sorted(groups)]


def _component_classes(g: OrientedGraph, comps: list[list[int]]) -> list[str]:
    where = {}
    for i, c in enumerate(comps):
        for v in c:
            where[v] = i
    ecount = [0] * len(comps)
    for s, _ in g.edges:
        ecount[where[s]] += 1
    out = []
    for c, ne in zip(comps, ecount):
        nv = len(c)
        out.append("tree" if ne == nv - 1 else "unicyclic" if ne == nv else "multicyclic")
    return out


def is_free_flow(g: OrientedGraph) -> bool:
    return all(d <= 1 for d in g.indegrees())


def analyze(g: OrientedGraph) -> GraphReport:
    indeg = g.indegrees()
    outdeg = g.outdegrees()
    comps = components(g)
    return GraphReport(
        indegree=tuple(indeg),
        outdegree=tuple(outdeg),
        components=tuple(tuple(c) for c in comps),
        classes=tuple(_component_classes(g, comps)),
        is_free_flow=all(d <= 1 for d in indeg),
        is_alternating=all(i == 0 or o == 0 for i, o in zip(indeg, outdeg)),
    )


def _adjacency(g: OrientedGraph) -> list[list[tuple[int, int]]]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for k, (s, t) in enumerate(g.edges):
        adj[s].append((t, k))
        adj[t].append((s, k))
    return adj


def _find_cycle(g: OrientedGraph, comp: list[int], adj) -> tuple[list[int], list[int]]:
    """Unique cycle of a unicyclic component: (edges, vertices) in walking order.

    Edge ``cycle[i]`` joins ``verts[i]`` and ``verts[i + 1]`` (indices mod length).
    """
    # strip leaves until only the cycle is left
    deg = {v: len(adj[v]) for v in comp}
    alive = set(comp)
    queue = deque(v for v in comp if deg[v] == 1)
    while queue:
        v = queue.popleft()
        if v not in alive:
            continue
        alive.discard(v)
        for w, _ in adj[v]:
            if w in alive:
                deg[w] -= 1
                if deg[w] == 1:
                    queue.append(w)
    start = min(alive)
    cycle, verts, prev_edge, v = [], [], -1, start
    while True:
        w, k = next((w, k) for w, k in adj[v] if w in alive and k != prev_edge)
        cycle.append(k)
        verts.append(v)
        prev_edge, v = k, w
        if v == start:
            return cycle, verts


def free_flow_by_definition(g: OrientedGraph) -> bool:
    """Structural test: pseudoforest, trees oriented away from a root,
    unicyclic components with a coherent cycle and the rest oriented away from it.
    """
    adj = _adjacency(g)
    comps = components(g)
    for comp, cls in zip(comps, _component_classes(g, comps)):
        if cls == "multicyclic":
            return False
        if cls == "tree":
            if not any(_oriented_away(g, adj, [r]) for r in comp):
                return False
        else:
            cyc, verts = _find_cycle(g, comp, adj)
            size = len(cyc)
            steps = [(verts[i], verts[(i + 1) % size]) for i in range(size)]
            forward = all(g.edges[k] == st for k, st in zip(cyc, steps))
            backward = all(g.edges[k] == st[::-1] for k, st in zip(cyc, steps))
            if not (forward or backward):
                return False
            on_cycle = {g.source(k) for k in cyc}
            if not _oriented_away(g, adj, sorted(on_cycle), skip=set(cyc)):
                return False
    return True


def _oriented_away(g: OrientedGraph, adj, roots: list[int], skip: set[int] = frozenset()) -> bool:
    seen = set(roots)
    queue = deque(roots)
    while queue:
        v = queue.popleft()
        for w, k in adj[v]:
            if k in skip or w in seen:
                continue
            if g.edges[k] != (v, w):
                return False
            seen.add(w)
            queue.append(w)
    return True


def enumerate_free_flow(u: OrientedGraph) -> list[Orientation]:
    """All free-flow orientations of ``u``'s underlying graph, sorted by flip set."""
    adj = _adjacency(u)
    comps = components(u)
    per_component: list[list[int]] = []
    for comp, cls in zip(comps, _component_classes(u, comps)):
        if cls == "multicyclic":
            return []
        options = []
        if cls == "tree":
            for root in comp:
                options.append(_orient_away(u, adj, [root], {}))
        else:
            cyc, verts = _find_cycle(u, comp, adj)
            size = len(cyc)
            for forward in (True, False):
                fixed = {}
                for i, k in enumerate(cyc):
                    a, b = verts[i], verts[(i + 1) % size]
                    fixed[k] = (a, b) if forward else (b, a)
                options.append(_orient_away(u, adj, sorted(verts), fixed))
        per_component.append(options)
    out = []
    for combo in itertools.product(*per_component):
        flips = 0
        for f in combo:
            flips |= f
        out.append(Orientation(u, flips))
    return sorted(out, key=lambda o: o.flips)


def _orient_away(u: OrientedGraph, adj, roots: list[int], fixed: dict[int, tuple[int, int]]) -> int:
    """Flip mask making ``fixed`` edges as given and every other edge point away from ``roots``."""
    want = dict(fixed)
    seen = set(roots)
    queue = deque(roots)
    while queue:
        v = queue.popleft()
        for w, k in adj[v]:
            if k in want or w in seen:
                continue
            want[k] = (v, w)
            seen.add(w)
            queue.append(w)
    flips = 0
    for k, direction in want.items():
        if u.edges[k] != direction:
            flips |= 1 << k
    return flips


def brute_force_free_flow(u: OrientedGraph) -> list[Orientation]:
    """All ``2^|E|`` orientations filtered by the indegree test (oracle)."""
    return [Orientation(u, f) for f in range(1 << u.m) if is_free_flow(u.flipped(f))]


# ---------------------------------------------------------------------------
# transforms

def source_resolution(g: OrientedGraph) -> tuple[OrientedGraph, EdgeBijection]:
    """Split every edge's source into its own vertex ``(s(e), e)``; targets stay shared.

    Vertex order: targets (in ``g``'s vertex order), then one split source per
    edge in edge order.  Edge ``k`` of the result is the image of edge ``k``.
    """
    indeg = g.indegrees()
    targets = [v for v in range(g.n) if indeg[v] > 0]
    tid = {v: i for i, v in enumerate(targets)}
    names = [g.names[v] for v in targets]
    names += [f"{g.names[s]}@{g.edge_label(k)}" for k, (s, _) in enumerate(g.edges)]
    edges = tuple((len(targets) + k, tid[t]) for k, (_, t) in enumerate(g.edges))
    h = OrientedGraph(len(names), edges, tuple(names))
    return h, EdgeBijection(tuple(range(g.m)))


def coherent_barycentric(g: OrientedGraph) -> OrientedGraph:
    """Vertices ``V ∪ E``; one edge ``bary(e) -> t(e)`` per edge ``e``."""
    names = list(g.names) + [f"[{g.edge_label(k)}]" for k in range(g.m)]
    edges = tuple((g.n + k, t) for k, (_, t) in enumerate(g.edges))
    return OrientedGraph(g.n + g.m, edges, tuple(names))


def barycentric_digraph(g: OrientedGraph) -> OrientedGraph:
    """Vertices ``V ∪ E``; edges ``bary(e) -> s(e)`` and ``bary(e) -> t(e)``.

    Edge ``2k`` goes to the source of edge ``k`` and ``2k + 1`` to its target.
    """
    names = list(g.names) + [f"[{g.edge_label(k)}]" for k in range(g.m)]
    edges = []
    for k, (s, t) in enumerate(g.edges):
        edges.append((g.n + k, s))
        edges.append((g.n + k, t))
    return OrientedGraph(g.n + g.m, tuple(edges), tuple(names))


def disjoint_union(*graphs: OrientedGraph) -> OrientedGraph:
    n, edges, names = 0, [], []
    for i, h in enumerate(graphs):
        edges += [(s + n, t + n) for s, t in h.edges]
        names += [f"{i}.{x}" for x in h.names]
        n += h.n
    return OrientedGraph(n, tuple(edges), tuple(names))


def relabel(g: OrientedGraph, perm: Sequence[int]) -> OrientedGraph:
    """Move vertex ``v`` to position ``perm[v]`` (edge order kept)."""
    names = [""] * g.n
    for v, p in enumerate(perm):
        names[p] = g.names[v]
    return OrientedGraph(g.n, tuple((perm[s], perm[t]) for s, t in g.edges), tuple(names))


def _component_code(g: OrientedGraph, comp: list[int]) -> tuple:
    local = {v: i for i, v in enumerate(comp)}
    edges = [(local[s], local[t]) for s, t in g.edges if s in local]
    indeg = [0] * len(comp)
    outdeg = [0] * len(comp)
    for s, t in edges:
        outdeg[s] += 1
        indeg[t] += 1
    # permutations only within (indegree, outdegree) classes
    classes: dict[tuple[int, int], list[int]] = {}
    for v in range(len(comp)):
        classes.setdefault((indeg[v], outdeg[v]), []).append(v)
    keys = sorted(classes)
    best = None
    for choice in itertools.product(*(itertools.permutations(classes[k]) for k in keys)):
        order = [v for block in choice for v in block]
        pos = {v: i for i, v in enumerate(order)}
        code = tuple(sorted((pos[s], pos[t]) for s, t in edges))
        if best is None or code < best:
            best = code
    return (tuple(keys), tuple(len(classes[k]) for k in keys), best)


def canonical_form(g: OrientedGraph) -> tuple:
    """Isomorphism-invariant code: sorted canonical codes of the components.

    Exhaustive within degree classes, so meant for graphs whose components are small.
    """
    return tuple(sorted(_component_code(g, c) for c in components(g)))


def isomorphic(g: OrientedGraph, h: OrientedGraph) -> bool:
    if (g.n, g.m) != (h.n, h.m) or sorted(g.indegrees()) != sorted(h.indegrees()):
        return False
    return canonical_form(g) == canonical_form(h)


# ---------------------------------------------------------------------------
# generators

def random_digraph(rng: random.Random, n: int, m: int) -> OrientedGraph:
    """Uniform ``m``-subset of the unordered pairs, each oriented by a coin flip."""
    pairs = list(itertools.combinations(range(n), 2))
    if m > len(pairs):
        raise ValueError(f"{m} edges do not fit on {n} vertices")
    chosen = rng.sample(pairs, m)
    return OrientedGraph(n, tuple((a, b) if rng.random() < 0.5 else (b, a) for a, b in chosen))


def path_graph(n_edges: int, pattern: str = "coherent") -> OrientedGraph:
    """``L_n`` (``"coherent"``) or ``A_n`` (``"alternating"``) on ``n_edges + 1`` vertices."""
    edges = []
    for k in range(n_edges):
        if pattern == "coherent" or k % 2 == 0:
            edges.append((k, k + 1))
        else:
            edges.append((k + 1, k))
    return OrientedGraph(n_edges + 1, tuple(edges))


def cycle_graph(n: int) -> OrientedGraph:
    """Coherently oriented cycle on ``n >= 3`` vertices."""
    return OrientedGraph(n, tuple((k, (k + 1) % n) for k in range(n)))


def complete_bipartite(a: int, b: int) -> OrientedGraph:
    """``K_{a,b}`` with every edge oriented from the first side to the second."""
    return OrientedGraph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))
