"""Matching, oriented-matching and multipath complexes of oriented graphs.

Vertex labels:

* ``graph_matching`` and ``multipath`` complexes use the edge index ``k``;
* ``matching`` and the oriented-matching complexes use ``(k, w)``, the edge of
  the barycentric subdivision from the barycentre of edge ``k`` to its endpoint
  ``w``.  An oriented matching only uses ``w = t(e_k)``, so the labels of the
  oriented pieces of ``M(G)`` are directly comparable across orientations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from . import _kernels
from .graphcore import OrientedGraph, _DSU, barycentric_digraph
from .linalg import ExactMatrix, HomologySummary, chain_homology
from .poset import MAX_EDGES, PosetSizeError, _enumerate

__all__ = [
    "KINDS",
    "SimplicialComplex",
    "WedgePrediction",
    "SuspensionSpec",
    "ComplexStats",
    "DecompositionReport",
    "build_complex",
    "oriented_matching_literal",
    "oriented_matching_masks",
    "union_decomposition_check",
    "predicted_homotopy",
    "reduced_homology",
    "join",
    "iterated_suspension",
    "complex_stats",
]

KINDS = ("graph_matching", "matching", "oriented_matching", "multipath", "oriented_matching_filtered")
KERNEL_MAX_EDGES = 20
UNION_MAX_EDGES = 12


class SimplicialComplex:
    """Finite abstract simplicial complex; simplices are sorted tuples of vertex indices.

    The complex with no simplices at all is allowed (it is the empty complex,
    whose reduced homology sits in degree -1).
    """

    __slots__ = ("labels", "_simplices", "_by_dim")

    def __init__(self, labels: Sequence[Hashable], simplices: Iterable[Sequence[int]], check: bool = True):
        self.labels = tuple(labels)
        simp = frozenset(tuple(sorted(s)) for s in simplices if len(s))
        if check:
            for s in simp:
                if len(set(s)) != len(s) or not all(0 <= v < len(self.labels) for v in s):
                    raise ValueError(f"bad simplex {s}")
                if len(s) > 1:
                    for face in itertools.combinations(s, len(s) - 1):
                        if face not in simp:
                            raise ValueError(f"not closed under faces: {face} missing from {s}")
        self._simplices = simp
        by: dict[int, list[tuple[int, ...]]] = {}
        for s in simp:
            by.setdefault(len(s) - 1, []).append(s)
        self._by_dim = {d: sorted(v) for d, v in sorted(by.items())}

    @classmethod
    def from_facets(cls, labels: Sequence[Hashable], facets: Iterable[Sequence[int]]) -> "SimplicialComplex":
        out = set()
        for f in facets:
            f = tuple(sorted(f))
            for r in range(1, len(f) + 1):
                out.update(itertools.combinations(f, r))
        return cls(labels, out, check=False)

    @classmethod
    def from_label_sets(cls, simplices: Iterable[Iterable[Hashable]], labels: Sequence[Hashable] | None = None,
                        check: bool = True) -> "SimplicialComplex":
        simplices = [tuple(s) for s in simplices]
        if labels is None:
            labels = sorted({v for s in simplices for v in s}, key=repr)
        index = {l: i for i, l in enumerate(labels)}
        return cls(labels, [tuple(index[v] for v in s) for s in simplices], check=check)

    @property
    def nvertices(self) -> int:
        return len(self.labels)

    @property
    def dimension(self) -> int:
        return max(self._by_dim, default=-1)

    def __len__(self) -> int:
        return len(self._simplices)

    def __contains__(self, s) -> bool:
        return tuple(sorted(s)) in self._simplices

    def simplices(self, dim: int | None = None) -> list[tuple[int, ...]]:
        if dim is not None:
            return list(self._by_dim.get(dim, []))
        return [s for d in self._by_dim for s in self._by_dim[d]]

    def label_sets(self) -> set[frozenset]:
        lab = self.labels
        return {frozenset(lab[v] for v in s) for s in self._simplices}

    def facets(self) -> list[tuple[int, ...]]:
        out = []
        for d, simps in self._by_dim.items():
            upper = self._by_dim.get(d + 1, [])
            covered = set()
            for s in upper:
                for face in itertools.combinations(s, len(s) - 1):
                    covered.add(face)
            out.extend(s for s in simps if s not in covered)
        return out

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self._by_dim.get(d, [])) for d in range(self.dimension + 1))

    def boundary_matrices(self) -> list[ExactMatrix]:
        """Reduced boundaries ``d_k : C_k -> C_{k-1}`` for ``k = 0..dim`` (``C_{-1}`` = the empty simplex)."""
        mats = []
        prev_index = {(): 0}
        for d in range(self.dimension + 1):
            simps = self._by_dim.get(d, [])
            m = ExactMatrix(len(prev_index), len(simps))
            for col, s in enumerate(simps):
                for i in range(len(s)):
                    face = s[:i] + s[i + 1:]
                    m.data[prev_index[face]][col] = -1 if i % 2 else 1
            mats.append(m)
            prev_index = {s: i for i, s in enumerate(simps)}
        return mats

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.label_sets() == other.label_sets()

    def __repr__(self) -> str:
        return f"SimplicialComplex(vertices={self.nvertices}, simplices={len(self)}, dim={self.dimension})"


# ---------------------------------------------------------------------------
# builders

def _guard(g: OrientedGraph, limit: int = MAX_EDGES, what: str = "complex") -> None:
    if g.m > limit:
        raise PosetSizeError(f"{what}: {g.m} edges exceeds the enumeration guard of {limit}")


def _graph_matchings(pairs: Sequence[tuple[int, int]]) -> list[int]:
    """Masks of pairwise vertex-disjoint edge sets (the empty one included)."""
    out = []
    stack = [(0, -1, 0)]
    while stack:
        mask, last, used = stack.pop()
        out.append(mask)
        for k in range(last + 1, len(pairs)):
            a, b = pairs[k]
            bits = (1 << a) | (1 << b)
            if not used & bits:
                stack.append((mask | (1 << k), k, used | bits))
    return out


def _mask_simplices(masks: Iterable[int]) -> list[tuple[int, ...]]:
    out = []
    for x in masks:
        if x:
            out.append(tuple(b for b in range(x.bit_length()) if (x >> b) & 1))
    return out


def oriented_matching_masks(g: OrientedGraph) -> list[int]:
    """Edge subsets with every indegree at most one (empty subset included)."""
    _guard(g, what="oriented matching complex")
    if g.m <= KERNEL_MAX_EDGES:
        src = np.array([s for s, _ in g.edges], dtype=np.int64)
        tgt = np.array([t for _, t in g.edges], dtype=np.int64)
        return [int(x) for x in _kernels.indeg_le_one_masks(src, tgt, g.n)]
    return sorted(_enumerate(g, "indeg_le_one"))


def _unicyclic_count(g: OrientedGraph, mask: int) -> int:
    dsu = _DSU(g.n)
    merges = 0
    size = 0
    for k, (s, t) in enumerate(g.edges):
        if (mask >> k) & 1:
            size += 1
            if dsu.union(s, t):
                merges += 1
    return size - merges  # cyclomatic number = number of unicyclic components here


def build_complex(g: OrientedGraph, kind: str, j: int | None = None) -> SimplicialComplex:
    """One of ``graph_matching``, ``matching``, ``oriented_matching``, ``multipath``,
    ``oriented_matching_filtered`` (needs ``j``)."""
    kind = kind.replace("-", "_")
    _guard(g, what=f"{kind} complex")
    if kind == "graph_matching":
        return SimplicialComplex(tuple(range(g.m)), _mask_simplices(_graph_matchings(g.edges)), check=False)
    if kind == "matching":
        b = barycentric_digraph(g)
        simp = []
        for x in _graph_matchings(b.edges):
            if x:
                simp.append(tuple(i for i in range(b.m) if (x >> i) & 1))
        labels = tuple((i // 2, b.edges[i][1]) for i in range(b.m))
        return SimplicialComplex(labels, simp, check=False)
    if kind == "oriented_matching":
        labels = tuple((k, t) for k, (_, t) in enumerate(g.edges))
        return SimplicialComplex(labels, _mask_simplices(oriented_matching_masks(g)), check=False)
    if kind == "multipath":
        return SimplicialComplex(tuple(range(g.m)), _mask_simplices(_enumerate(g, "multipath")), check=False)
    if kind == "oriented_matching_filtered":
        if j is None or j < 0:
            raise ValueError("oriented_matching_filtered needs a cycle bound j >= 0")
        labels = tuple((k, t) for k, (_, t) in enumerate(g.edges))
        masks = [x for x in oriented_matching_masks(g) if _unicyclic_count(g, x) <= j]
        return SimplicialComplex(labels, _mask_simplices(masks), check=False)
    raise ValueError(f"unknown complex kind {kind!r}; expected one of {', '.join(KINDS)}")


def oriented_matching_literal(g: OrientedGraph) -> SimplicialComplex:
    """Matchings of the barycentre-to-target part of the barycentric subdivision."""
    _guard(g, what="oriented matching complex")
    b = barycentric_digraph(g)
    keep = [2 * k + 1 for k in range(g.m)]  # bary(e_k) -> t(e_k)
    pairs = [b.edges[i] for i in keep]
    labels = tuple((k, b.edges[i][1]) for k, i in enumerate(keep))
    return SimplicialComplex(labels, _mask_simplices(_graph_matchings(pairs)), check=False)


@dataclass(frozen=True)
class DecompositionReport:
    ok: bool
    matching_simplices: int
    union_simplices: int
    pieces: dict  # flip mask -> number of simplices of that oriented piece
    missing: tuple = ()
    extra: tuple = ()


def union_decomposition_check(u: OrientedGraph) -> DecompositionReport:
    """Compare ``M(G)`` with the union of the oriented pieces over all ``2^|E|`` orientations."""
    _guard(u, UNION_MAX_EDGES, "union decomposition")
    whole = build_complex(u, "matching").label_sets()
    union: set[frozenset] = set()
    pieces = {}
    for flips in range(1 << u.m):
        piece = build_complex(u.flipped(flips), "oriented_matching").label_sets()
        pieces[flips] = len(piece)
        union |= piece
    missing = tuple(sorted((tuple(sorted(s)) for s in whole - union)))
    extra = tuple(sorted((tuple(sorted(s)) for s in union - whole)))
    return DecompositionReport(not missing and not extra, len(whole), len(union), pieces, missing, extra)


# ---------------------------------------------------------------------------
# homotopy prediction and suspensions

@dataclass(frozen=True)
class WedgePrediction:
    kind: str  # "contractible" | "wedge"
    q: int
    sphere_dim: int

    def reduced_betti(self) -> dict[int, int]:
        if self.kind == "contractible" or self.q == 0:
            return {}
        return {self.sphere_dim: self.q}


def predicted_homotopy(g: OrientedGraph) -> WedgePrediction:
    indeg = g.indegrees()
    positive = sum(1 for d in indeg if d > 0)
    if any(d == 1 for d in indeg):
        return WedgePrediction("contractible", 0, positive - 1)
    q = 1
    for d in indeg:
        if d > 1:
            q *= d - 1
    return WedgePrediction("wedge", q, positive - 1)


def reduced_homology(x: SimplicialComplex, coeff: object = "q") -> HomologySummary:
    """Reduced homology in degrees ``-1..dim``."""
    mats = x.boundary_matrices()
    return chain_homology(mats, coeff, dims=[1] + [len(x.simplices(d)) for d in range(x.dimension + 1)], start=-1)


def join(x: SimplicialComplex, y: SimplicialComplex) -> SimplicialComplex:
    """Simplices of ``x``, of ``y`` and all unions; labels are tagged ``(0, .)``/``(1, .)`` on a clash."""
    if set(x.labels) & set(y.labels):
        labels = tuple((0, l) for l in x.labels) + tuple((1, l) for l in y.labels)
    else:
        labels = x.labels + y.labels
    off = x.nvertices
    xs = x.simplices()
    ys = [tuple(v + off for v in s) for s in y.simplices()]
    simp = xs + ys + [a + b for a in xs for b in ys]
    return SimplicialComplex(labels, simp, check=False)


@dataclass(frozen=True)
class SuspensionSpec:
    alpha: tuple[int, ...]

    def __post_init__(self):
        if any(a < 0 for a in self.alpha):
            raise ValueError("suspension counts must be non-negative")
        object.__setattr__(self, "alpha", tuple(a for a in self.alpha if a))

    @property
    def length(self) -> int:
        """``|α|``: number of joined point sets, one more than the sphere dimension."""
        return len(self.alpha)

    @property
    def points(self) -> int:
        return sum(self.alpha)

    def q(self) -> int:
        out = 1
        for a in self.alpha:
            out *= a - 1
        return out

    def predicted(self) -> WedgePrediction:
        if any(a == 1 for a in self.alpha):
            return WedgePrediction("contractible", 0, self.length - 1)
        return WedgePrediction("wedge", self.q(), self.length - 1)


def _points(n: int, tag: int) -> SimplicialComplex:
    return SimplicialComplex(tuple((tag, p) for p in range(n)), [(p,) for p in range(n)], check=False)


def iterated_suspension(spec: SuspensionSpec) -> SimplicialComplex:
    """``Σ_{n_1} ∘ ... ∘ Σ_{n_k}`` applied to the empty complex."""
    x = SimplicialComplex((), [])
    for i in range(len(spec.alpha) - 1, -1, -1):
        x = join(_points(spec.alpha[i], i), x)
    return x


@dataclass(frozen=True)
class ComplexStats:
    f_vector: tuple[int, ...]
    euler_characteristic: int
    is_pure: bool
    facet_dimensions: tuple[int, ...]

    def as_dict(self) -> dict:
        return {"f_vector": list(self.f_vector), "euler_characteristic": self.euler_characteristic,
                "is_pure": self.is_pure, "facet_dimensions": list(self.facet_dimensions)}


def complex_stats(x: SimplicialComplex) -> ComplexStats:
    f = x.f_vector()
    dims = tuple(sorted({len(s) - 1 for s in x.facets()}))
    return ComplexStats(f, sum((-1) ** d * n for d, n in enumerate(f)), len(dims) <= 1, dims)
