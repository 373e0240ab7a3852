"""Ranked squared posets of edge subsets, sign assignments, isomorphism testing."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .graphcore import OrientedGraph

__all__ = [
    "PosetError",
    "PosetSizeError",
    "RankedPoset",
    "SignAssignment",
    "PROPERTIES",
    "MAX_EDGES",
    "subset_property",
    "monotone_poset",
    "sign_assignment",
    "boolean_sign",
    "face_poset",
    "poset_isomorphic",
]

MAX_EDGES = 30
MAX_ISO_SIZE = 20000
PROPERTIES = ("spanning", "multipath", "indeg_le_one")


class PosetError(ValueError):
    pass


class PosetSizeError(PosetError):
    """An enumeration or search guard was exceeded."""


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class RankedPoset:
    """Elements are bitmasks over a ground set of size ``width``.

    ``covers`` lists index pairs ``(lower, upper)``; every cover adds exactly one bit.
    """

    elements: tuple[int, ...]
    ranks: tuple[int, ...]
    covers: tuple[tuple[int, int], ...]
    width: int
    labels: tuple = ()
    index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.index:
            object.__setattr__(self, "index", {x: i for i, x in enumerate(self.elements)})

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def from_masks(cls, masks, width: int, labels: Sequence = ()) -> "RankedPoset":
        """Poset of the given masks ordered by inclusion, rank = cardinality."""
        elements = tuple(sorted(set(masks), key=lambda x: (_popcount(x), x)))
        index = {x: i for i, x in enumerate(elements)}
        covers = []
        for i, x in enumerate(elements):
            for b in range(width):
                if not (x >> b) & 1:
                    j = index.get(x | (1 << b))
                    if j is not None:
                        covers.append((i, j))
        return cls(elements, tuple(_popcount(x) for x in elements), tuple(covers), width, tuple(labels), index)

    def up(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.elements]
        for lo, hi in self.covers:
            out[lo].append(hi)
        return out

    def down(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.elements]
        for lo, hi in self.covers:
            out[hi].append(lo)
        return out

    def rank_sizes(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for r in self.ranks:
            out[r] = out.get(r, 0) + 1
        return dict(sorted(out.items()))

    def of_rank(self, r: int) -> list[int]:
        return [i for i, x in enumerate(self.ranks) if x == r]

    def cover_bit(self, lo: int, hi: int) -> int:
        diff = self.elements[hi] & ~self.elements[lo]
        return diff.bit_length() - 1

    def is_ranked(self) -> bool:
        return all(self.ranks[hi] == self.ranks[lo] + 1 for lo, hi in self.covers)

    def is_downward_closed(self) -> bool:
        elems = set(self.elements)
        for x in self.elements:
            y = x
            while y:
                low = y & -y
                if (x ^ low) not in elems:
                    return False
                y ^= low
        return True

    def chains(self) -> Iterator[tuple[int, int, int]]:
        """All length-2 cover chains ``z < y < x`` as index triples."""
        up = self.up()
        for z in range(len(self)):
            for y in up[z]:
                for x in up[y]:
                    yield z, y, x

    def squares(self) -> list[tuple[int, int, int, int]]:
        """Every square ``(z, y, y', x)`` once (``y < y'``); raises if a chain has no unique partner."""
        up = self.up()
        out = []
        for z, y, x in self.chains():
            partners = [w for w in up[z] if w != y and x in up[w]]
            if len(partners) != 1:
                raise PosetError(f"poset is not squared: chain {self.elements[z]:b} < {self.elements[y]:b} "
                                 f"< {self.elements[x]:b} has {len(partners)} partners")
            if y < partners[0]:
                out.append((z, y, partners[0], x))
        return out

    def is_squared(self) -> bool:
        try:
            self.squares()
        except PosetError:
            return False
        return True

    def without_bottom(self) -> "RankedPoset":
        """Drop the empty element (rank 0), if present."""
        if not self.elements or self.elements[0] != 0:
            return self
        return RankedPoset.from_masks(self.elements[1:], self.width, self.labels)

    def to_json(self) -> dict:
        return {
            "elements": [[b for b in range(self.width) if (x >> b) & 1] for x in self.elements],
            "ranks": list(self.ranks),
            "covers": [list(c) for c in self.covers],
        }


@dataclass(frozen=True)
class SignAssignment:
    """``Z/2`` label on each cover ``(lower index, upper index)``."""

    signs: dict

    def __getitem__(self, cover: tuple[int, int]) -> int:
        return self.signs[cover]

    def violations(self, p: RankedPoset) -> list[tuple[int, int, int, int]]:
        s = self.signs
        return [(z, y, w, x) for z, y, w, x in p.squares()
                if (s[(z, y)] + s[(y, x)]) % 2 != (s[(z, w)] + s[(w, x)] + 1) % 2]


def boolean_sign(lower: int, bit: int) -> int:
    """Parity of the elements of ``lower`` with index below ``bit``."""
    return _popcount(lower & ((1 << bit) - 1)) & 1


def sign_assignment(p: RankedPoset) -> SignAssignment:
    if not p.is_squared():
        raise PosetError("sign assignment needs a squared poset")
    return SignAssignment({(lo, hi): boolean_sign(p.elements[lo], p.cover_bit(lo, hi)) for lo, hi in p.covers})


# ---------------------------------------------------------------------------
# monotone properties

def subset_property(g: OrientedGraph, prop: str):
    """Incremental checker ``(state, edge) -> new_state | None`` and its initial state."""
    if prop == "spanning":
        return None, (lambda state, k: state)
    if prop == "indeg_le_one":
        def step(state, k):
            t = g.edges[k][1]
            if (state >> t) & 1:
                return None
            return state | (1 << t)
        return 0, step
    if prop == "multipath":
        def step(state, k):
            ins, outs, comp = state
            s, t = g.edges[k]
            if (ins >> t) & 1 or (outs >> s) & 1:
                return None
            # component labels per vertex; relabel on merge
            rs, rt = comp[s], comp[t]
            if rs == rt:
                return None
            lo, hi = min(rs, rt), max(rs, rt)
            comp = tuple(lo if r == hi else r for r in comp)
            return ins | (1 << t), outs | (1 << s), comp
        return (0, 0, tuple(range(g.n))), step
    raise ValueError(f"unknown monotone property {prop!r}; expected one of {', '.join(PROPERTIES)}")


def _enumerate(g: OrientedGraph, prop: str) -> list[int]:
    init, step = subset_property(g, prop)
    if prop == "spanning":
        return list(range(1 << g.m))
    out = []
    stack = [(0, -1, init)]
    while stack:
        mask, last, state = stack.pop()
        out.append(mask)
        for k in range(last + 1, g.m):
            nxt = step(state, k)
            if nxt is not None:
                stack.append((mask | (1 << k), k, nxt))
    return out


def monotone_poset(g: OrientedGraph, prop: str) -> RankedPoset:
    """Spanning subgraphs with the property, ordered by inclusion; the empty subgraph included."""
    if g.m > MAX_EDGES:
        raise PosetSizeError(f"monotone poset: {g.m} edges exceeds the enumeration guard of {MAX_EDGES}")
    masks = _enumerate(g, prop)
    return RankedPoset.from_masks(masks, g.m, tuple(g.edge_label(k) for k in range(g.m)))


def face_poset(x) -> RankedPoset:
    """Nonempty simplices of a simplicial complex, as masks over its vertex indices."""
    masks = [sum(1 << v for v in s) for s in x.simplices()]
    return RankedPoset.from_masks(masks, x.nvertices, x.labels)


# ---------------------------------------------------------------------------
# isomorphism

def _profiles(p: RankedPoset, up, down) -> list[tuple]:
    return [(p.ranks[i], len(up[i]), len(down[i]), tuple(sorted(len(up[j]) for j in up[i])),
             tuple(sorted(len(down[j]) for j in down[i]))) for i in range(len(p))]


def poset_isomorphic(p: RankedPoset, q: RankedPoset) -> dict[int, int] | None:
    """Rank- and cover-preserving bijection ``p -> q`` (element indices), or ``None``."""
    if len(p) > MAX_ISO_SIZE or len(q) > MAX_ISO_SIZE:
        raise PosetSizeError(f"poset isomorphism: size {max(len(p), len(q))} exceeds the guard of {MAX_ISO_SIZE}")
    if len(p) != len(q) or len(p.covers) != len(q.covers) or p.rank_sizes() != q.rank_sizes():
        return None
    up_p, down_p, up_q, down_q = p.up(), p.down(), q.up(), q.down()
    prof_p, prof_q = _profiles(p, up_p, down_p), _profiles(q, up_q, down_q)
    if sorted(prof_p) != sorted(prof_q):
        return None
    by_lower: dict[frozenset, list[int]] = {}
    for j in range(len(q)):
        if down_q[j]:
            by_lower.setdefault(frozenset(down_q[j]), []).append(j)
    minimal_q: dict[tuple, list[int]] = {}
    for j in range(len(q)):
        if not down_q[j]:
            minimal_q.setdefault(prof_q[j], []).append(j)

    # placement order: minimal elements in BFS order, each followed by everything it completes
    minimal_p = [i for i in range(len(p)) if not down_p[i]]
    order_min: list[int] = []
    seen = set()
    for start in minimal_p:
        if start in seen:
            continue
        queue = deque([start])
        seen.add(start)
        while queue:
            a = queue.popleft()
            order_min.append(a)
            # neighbours: minimal elements sharing an upper cover
            for u in up_p[a]:
                for b in down_p[u]:
                    if b not in seen and not down_p[b]:
                        seen.add(b)
                        queue.append(b)
    placed = set()
    sequence: list[int] = []
    waiting = {i: len(down_p[i]) for i in range(len(p))}
    for a in order_min:
        frontier = [a]
        while frontier:
            x = frontier.pop()
            sequence.append(x)
            placed.add(x)
            for u in up_p[x]:
                waiting[u] -= 1
                if waiting[u] == 0:
                    frontier.append(u)
    if len(sequence) != len(p):
        return None

    f: dict[int, int] = {}
    used: set[int] = set()

    def candidates(x: int) -> list[int]:
        if not down_p[x]:
            return [j for j in minimal_q.get(prof_p[x], []) if j not in used]
        key = frozenset(f[y] for y in down_p[x])
        return [j for j in by_lower.get(key, []) if j not in used and prof_q[j] == prof_p[x]]

    # iterative DFS with explicit candidate stacks
    stack: list[list[int]] = []
    pos = 0
    while True:
        if pos == len(sequence):
            return dict(f)
        if len(stack) == pos:
            stack.append(candidates(sequence[pos]))
        options = stack[pos]
        x = sequence[pos]
        if x in f:
            used.discard(f.pop(x))
        if not options:
            stack.pop()
            pos -= 1
            if pos < 0:
                return None
            continue
        j = options.pop()
        f[x] = j
        used.add(j)
        pos += 1
