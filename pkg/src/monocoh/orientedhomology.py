"""Bigraded oriented homology over the Boolean poset of re-orientations.

For a base orientation ``o`` of an underlying graph, every flip set ``F``
gives the orientation ``o ⊕ F``; its oriented matching complex contributes a
simplicial chain group.  Generators are pairs ``(F, S)`` with ``S`` a
nonempty edge set whose targets in ``o ⊕ F`` are distinct.  The homological
degree is ``|F|`` and the simplicial degree is ``|S| - 1``.  Adding an edge
``e`` to ``F`` keeps ``S`` whenever ``e`` is not in ``S`` (only then is the
oriented matching shared by both orientations), with the Boolean sign of
``(F, e)``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .complexes import oriented_matching_masks
from .graphcore import Orientation, OrientedGraph, enumerate_free_flow
from .linalg import ExactMatrix, cochain_cohomology
from .poset import PosetSizeError, RankedPoset, boolean_sign

__all__ = [
    "MAX_OH_EDGES",
    "OrientationPoset",
    "BigradedComplex",
    "BigradedTable",
    "FreeFlowHistogram",
    "DecompositionResult",
    "orientation_poset",
    "build_oh_complex",
    "oriented_homology",
    "freeflow_histogram",
    "boolean_decomposition_check",
]

MAX_OH_EDGES = 14


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _as_orientation(u: OrientedGraph, o: Orientation | int | None) -> Orientation:
    if o is None:
        return Orientation(u, 0)
    if isinstance(o, Orientation):
        if o.base != u:
            raise ValueError("orientation belongs to a different graph")
        return o
    return Orientation(u, int(o))


@dataclass(frozen=True)
class OrientationPoset:
    """All ``2^|E|`` flip sets relative to ``base``, ordered by inclusion."""

    base: Orientation
    poset: RankedPoset

    def orientation(self, flips: int) -> Orientation:
        return Orientation(self.base.base, self.base.flips ^ flips)

    def sign(self, flips: int, e: int) -> int:
        return boolean_sign(flips, e)


def orientation_poset(u: OrientedGraph, o: Orientation | int | None = None) -> OrientationPoset:
    if u.m > MAX_OH_EDGES:
        raise PosetSizeError(f"orientation poset: {u.m} edges exceeds the guard of {MAX_OH_EDGES}")
    base = _as_orientation(u, o)
    return OrientationPoset(base, RankedPoset.from_masks(range(1 << u.m), u.m))


@dataclass
class BigradedComplex:
    """``basis[b][i]`` lists ``(F, S)`` pairs; ``maps[b][i]`` goes from ``(i, b)`` to ``(i+1, b)``."""

    base: Orientation
    m: int
    basis: dict[int, list[list[tuple[int, int]]]]
    maps: dict[int, list[ExactMatrix]]
    augmented: bool = False

    def dims(self) -> dict[tuple[int, int], int]:
        return {(i, b): len(col) for b, cols in self.basis.items() for i, col in enumerate(cols) if col}

    def total_size(self) -> int:
        return sum(len(col) for cols in self.basis.values() for col in cols)

    def d_squared_zero(self) -> bool:
        for mats in self.maps.values():
            for a, b in zip(mats, mats[1:]):
                if not (b @ a).is_zero():
                    return False
        return True


def _sign(flips: int, e: int) -> int:
    return -1 if boolean_sign(flips, e) else 1


def build_oh_complex(u: OrientedGraph, o: Orientation | int | None = None, augmented: bool = False) -> BigradedComplex:
    """Bigraded cochain complex of ``u`` relative to the base orientation ``o``.

    With ``augmented`` the empty matching is kept as a generator in simplicial
    degree ``-1``.
    """
    if u.m > MAX_OH_EDGES:
        raise PosetSizeError(f"oriented homology: {u.m} edges exceeds the guard of {MAX_OH_EDGES}")
    base = _as_orientation(u, o)
    m = u.m
    lo_b = -1 if augmented else 0
    basis: dict[int, list[list[tuple[int, int]]]] = {b: [[] for _ in range(m + 1)] for b in range(lo_b, m)}
    for flips in range(1 << m):
        g = u.flipped(base.flips ^ flips)
        i = _popcount(flips)
        for s in oriented_matching_masks(g):
            if s or augmented:
                basis[_popcount(s) - 1][i].append((flips, s))
    maps: dict[int, list[ExactMatrix]] = {}
    for b, cols in basis.items():
        mats = []
        for i in range(m):
            src, dst = cols[i], cols[i + 1]
            index = {x: k for k, x in enumerate(dst)}
            mat = ExactMatrix(len(dst), len(src))
            for col, (flips, s) in enumerate(src):
                free = ~(flips | s)
                for e in range(m):
                    if (free >> e) & 1:
                        row = index[(flips | (1 << e), s)]
                        mat.data[row][col] = _sign(flips, e)
            mats.append(mat)
        maps[b] = mats
    return BigradedComplex(base, m, basis, maps, augmented)


@dataclass(frozen=True)
class BigradedTable:
    """Nonzero dimensions keyed by ``(homological degree i, simplicial degree b)``."""

    dims: dict
    m: int

    def at(self, b: int) -> list[int]:
        return [self.dims.get((i, b), 0) for i in range(self.m + 1)]

    def total(self) -> int:
        return sum(self.dims.values())

    def as_dict(self) -> dict:
        return {f"{i},{b}": v for (i, b), v in sorted(self.dims.items())}


def oriented_homology(u: OrientedGraph, o: Orientation | int | None = None, coeff: object = "q",
                      augmented: bool = False) -> BigradedTable:
    c = build_oh_complex(u, o, augmented)
    out = {}
    for b, cols in c.basis.items():
        h = cochain_cohomology(c.maps[b], [len(col) for col in cols], coeff)
        for i, v in h.betti.items():
            if v:
                out[(i, b)] = v
    return BigradedTable(dict(sorted(out.items())), u.m)


@dataclass(frozen=True)
class FreeFlowHistogram:
    counts: tuple[int, ...]

    def total(self) -> int:
        return sum(self.counts)

    def as_table(self, m: int) -> dict:
        return {(i, m - 1): c for i, c in enumerate(self.counts) if c}


def freeflow_histogram(u: OrientedGraph, o: Orientation | int | None = None) -> FreeFlowHistogram:
    """Free-flow orientations of ``u`` counted by flip distance from ``o``."""
    base = _as_orientation(u, o)
    counts = [0] * (u.m + 1)
    for ff in enumerate_free_flow(u):
        counts[ff.distance(base)] += 1
    return FreeFlowHistogram(tuple(counts))


@dataclass(frozen=True)
class DecompositionResult:
    ok: bool
    blocks: dict = field(repr=False)  # (S, F & S) -> list of (F, S)
    predicted: dict = field(default_factory=dict)  # (i, b) -> count of full blocks
    problems: tuple[str, ...] = ()


def boolean_decomposition_check(u: OrientedGraph, o: Orientation | int | None = None,
                                augmented: bool = False) -> DecompositionResult:
    """Split the generators into blocks keyed by an oriented matching of the underlying graph.

    A block is the set of ``(F, S)`` sharing ``S`` and the orientation of
    ``S`` (the bits ``F & S``); the other ``|E| - |S|`` edges are free, so the
    block is a Boolean cube.  Cubes of positive dimension are acyclic and the
    full matchings (``|S| = |E|``) each leave one class.
    """
    c = build_oh_complex(u, o, augmented)
    m = u.m
    blocks: dict[tuple[int, int], list[tuple[int, int]]] = {}
    where: dict[tuple[int, int], tuple[int, int]] = {}
    for cols in c.basis.values():
        for col in cols:
            for flips, s in col:
                key = (s, flips & s)
                blocks.setdefault(key, []).append((flips, s))
                where[(flips, s)] = key
    problems = []
    for (s, fs), members in sorted(blocks.items()):
        want = 1 << (m - _popcount(s))
        if len(members) != want:
            problems.append(f"block S={s:b} has {len(members)} generators, expected {want}")
    for b, mats in c.maps.items():
        cols = c.basis[b]
        for i, mat in enumerate(mats):
            for r, row in enumerate(mat.data):
                target = cols[i + 1][r]
                for k in row:
                    if where[cols[i][k]] != where[target]:
                        problems.append(f"differential leaves block of {cols[i][k]} for {target}")
    predicted: Counter = Counter()
    full = (1 << m) - 1
    for (s, fs), members in blocks.items():
        if s == full:
            (flips, _), = members
            predicted[(_popcount(flips), m - 1)] += 1
    return DecompositionResult(not problems, blocks, dict(sorted(predicted.items())), tuple(problems))
