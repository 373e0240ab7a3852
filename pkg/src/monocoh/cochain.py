"""Monotone cochain complexes with coefficients in ``A^{(x) components}``.

A basis vector of degree ``n`` is a pair ``(H, digits)``: ``H`` a subgraph
with ``n`` edges (as an edge mask) and ``digits`` one algebra basis index per
connected component of ``H``, components ordered by their minimal vertex.
Within ``H`` the digit tuples are enumerated in mixed-radix order with the
first component most significant.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from . import _kernels
from .algebra import FiniteAlgebra, validate
from .graphcore import OrientedGraph, analyze, coherent_barycentric, components, source_resolution
from .linalg import CompositionError, ExactMatrix, HomologySummary, cochain_cohomology
from .poset import boolean_sign, monotone_poset

__all__ = [
    "FunctorSpec",
    "CochainComplex",
    "SourceResolutionReport",
    "COCHAIN_PROPERTIES",
    "monotone_cochain",
    "oriented_matching_cochain",
    "cohomology",
    "euler_characteristic",
    "poset_euler_characteristic",
    "tensor",
    "concentrated",
    "verify_source_resolution_iso",
]

COCHAIN_PROPERTIES = ("spanning", "multipath", "indeg_le_one", "oriented_matching")


@dataclass(frozen=True)
class FunctorSpec:
    algebra: FiniteAlgebra
    variant: str = "identity"  # or "zero": non-merging covers act by 0

    def __post_init__(self):
        if self.variant not in ("identity", "zero"):
            raise ValueError(f"functor variant must be 'identity' or 'zero', not {self.variant!r}")


@dataclass
class CochainComplex:
    """``C^0 -> C^1 -> ...``; ``differentials[n]`` has shape ``dims[n+1] x dims[n]``."""

    dims: tuple[int, ...]
    differentials: tuple[ExactMatrix, ...]
    basis_fn: Callable[[int], list] | None = field(default=None, repr=False)
    checked: bool = False
    description: str = ""

    def __post_init__(self):
        if len(self.differentials) != max(len(self.dims) - 1, 0):
            raise ValueError("need one differential between each pair of consecutive degrees")
        for n, d in enumerate(self.differentials):
            if d.shape != (self.dims[n + 1], self.dims[n]):
                raise ValueError(f"differential {n} has shape {d.shape}, expected {(self.dims[n + 1], self.dims[n])}")

    def basis(self, n: int) -> list:
        if self.basis_fn is None:
            return list(range(self.dims[n]))
        return self.basis_fn(n)

    def d_squared_zero(self) -> bool:
        return self.first_nonzero_composition() is None

    def first_nonzero_composition(self) -> int | None:
        for n in range(len(self.differentials) - 1):
            if not (self.differentials[n + 1] @ self.differentials[n]).is_zero():
                return n
        return None

    def check(self) -> "CochainComplex":
        bad = self.first_nonzero_composition()
        if bad is not None:
            raise CompositionError(bad + 1, f"internal consistency failure: d∘d != 0 from degree {bad} "
                                            f"({self.description or 'cochain complex'})")
        self.checked = True
        return self

    def graded_dims(self) -> dict[int, int]:
        return {n: d for n, d in enumerate(self.dims)}


# ---------------------------------------------------------------------------
# merge blocks

def _merge_entries_exact(alg: FiniteAlgebra, k: int, i: int, j: int):
    a = alg.dim
    src, dst, val = [], [], []
    for code in range(a ** k):
        digits = []
        rem = code
        for _ in range(k):
            digits.append(rem % a)
            rem //= a
        digits.reverse()
        prod = alg.table[digits[i]][digits[j]]
        for c, v in enumerate(prod):
            if not v:
                continue
            out = 0
            for t in range(k):
                if t == j:
                    continue
                out = out * a + (c if t == i else digits[t])
            src.append(code)
            dst.append(out)
            val.append(v)
    return src, dst, val


def _merge_provider(alg: FiniteAlgebra):
    if alg.is_integral:
        table = alg.table_array()

        @lru_cache(maxsize=None)
        def merge(k: int, i: int, j: int):
            s, d, v = _kernels.merge_block(alg.dim, k, i, j, table)
            return s.tolist(), d.tolist(), v.tolist()
    else:
        @lru_cache(maxsize=None)
        def merge(k: int, i: int, j: int):
            return _merge_entries_exact(alg, k, i, j)
    return merge


def _component_index(g: OrientedGraph, mask: int) -> tuple[int, list[int]]:
    comps = components(g, mask)
    where = [0] * g.n
    for idx, c in enumerate(comps):
        for v in c:
            where[v] = idx
    return len(comps), where


def _decode(code: int, k: int, a: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        out.append(code % a)
        code //= a
    return tuple(reversed(out))


# ---------------------------------------------------------------------------
# assembly

def monotone_cochain(g: OrientedGraph, prop: str, spec: FunctorSpec, check: bool = True) -> CochainComplex:
    """Cochain complex of the monotone poset of ``prop`` with coefficients ``F_A``.

    ``prop`` is one of ``spanning``, ``multipath``, ``indeg_le_one``, or
    ``oriented_matching`` (the multipath complex of the coherent barycentric graph).
    """
    if prop == "oriented_matching":
        return oriented_matching_cochain(g, spec, check)
    alg = spec.algebra
    validate(alg)
    a = alg.dim
    p = monotone_poset(g, prop)
    merge = _merge_provider(alg)

    comp = [_component_index(g, x) for x in p.elements]
    top = max(p.ranks, default=0)
    offsets = [0] * len(p)
    dims = [0] * (top + 1)
    for idx, r in enumerate(p.ranks):
        offsets[idx] = dims[r]
        dims[r] += a ** comp[idx][0]

    mats = [ExactMatrix(dims[n + 1], dims[n]) for n in range(top)]
    for lo, hi in p.covers:
        x = p.elements[lo]
        e = p.cover_bit(lo, hi)
        s, t = g.edges[e]
        k, where = comp[lo]
        sign = -1 if boolean_sign(x, e) else 1
        rows = mats[p.ranks[lo]].data
        o_lo, o_hi = offsets[lo], offsets[hi]
        ci, cj = where[s], where[t]
        if ci != cj:
            i, j = (ci, cj) if ci < cj else (cj, ci)
            src, dst, val = merge(k, i, j)
            for u, w, v in zip(src, dst, val):
                row = rows[o_hi + w]
                col = o_lo + u
                nv = row.get(col, 0) + sign * v
                if nv:
                    row[col] = nv
                else:
                    row.pop(col, None)
        elif spec.variant == "identity":
            for u in range(a ** k):
                rows[o_hi + u][o_lo + u] = sign
    elements, ranks = p.elements, p.ranks

    def basis(n: int) -> list:
        out = []
        for idx, x in enumerate(elements):
            if ranks[idx] == n:
                k = comp[idx][0]
                out.extend((x, _decode(code, k, a)) for code in range(a ** k))
        return out

    c = CochainComplex(tuple(dims), tuple(mats), basis, description=f"{prop} cochain complex with {alg.describe()}")
    return c.check() if check else c


def oriented_matching_cochain(g: OrientedGraph, spec: FunctorSpec, check: bool = True) -> CochainComplex:
    """Multipath cochain complex of the coherent barycentric graph of ``g``."""
    c = monotone_cochain(coherent_barycentric(g), "multipath", spec, check)
    c.description = f"oriented matching cochain complex with {spec.algebra.describe()}"
    return c


def cohomology(c: CochainComplex, coeff: object = "q") -> HomologySummary:
    if not c.checked:
        c.check()
    return cochain_cohomology(c.differentials, c.dims, coeff, check=False)


def euler_characteristic(c: CochainComplex) -> int:
    return sum((-1) ** n * d for n, d in enumerate(c.dims))


def poset_euler_characteristic(g: OrientedGraph, prop: str, alpha: int) -> int:
    """Sum over the poset of ``(-1)^rank * alpha^components``, without building any map."""
    if prop == "oriented_matching":
        g, prop = coherent_barycentric(g), "multipath"
    p = monotone_poset(g, prop)
    return sum((-1) ** r * alpha ** len(components(g, x)) for x, r in zip(p.elements, p.ranks))


def concentrated(dim: int, label: str = "") -> CochainComplex:
    """A single group of dimension ``dim`` in degree 0."""
    return CochainComplex((dim,), (), checked=True, description=label or f"rank {dim} in degree 0")


def tensor(c1: CochainComplex, c2: CochainComplex) -> CochainComplex:
    """Graded tensor product, ``d(x⊗y) = dx⊗y + (-1)^|x| x⊗dy``.

    Degree-``n`` basis: blocks ``C1^a ⊗ C2^(n-a)`` for increasing ``a``, each
    in ``x``-major order.
    """
    top = len(c1.dims) + len(c2.dims) - 2
    blocks: dict[int, dict[int, int]] = {}
    dims = []
    for n in range(top + 1):
        off = 0
        blocks[n] = {}
        for a in range(len(c1.dims)):
            b = n - a
            if 0 <= b < len(c2.dims):
                blocks[n][a] = off
                off += c1.dims[a] * c2.dims[b]
        dims.append(off)
    mats = []
    for n in range(top):
        m = ExactMatrix(dims[n + 1], dims[n])
        for a, off in blocks[n].items():
            b = n - a
            d1b = c2.dims[b]
            # dx ⊗ y
            if a < len(c1.differentials):
                off_t = blocks[n + 1][a + 1]
                d2b = c2.dims[b]
                for r, row in enumerate(c1.differentials[a].data):
                    for col, v in row.items():
                        for y in range(d2b):
                            m.data[off_t + r * d2b + y][off + col * d1b + y] = v
            # (-1)^a x ⊗ dy
            if b < len(c2.differentials):
                off_t = blocks[n + 1][a]
                sgn = -1 if a % 2 else 1
                nb1 = c2.dims[b + 1]
                for x in range(c1.dims[a]):
                    for r, row in enumerate(c2.differentials[b].data):
                        target = m.data[off_t + x * nb1 + r]
                        for col, v in row.items():
                            target[off + x * d1b + col] = sgn * v
        mats.append(m)

    def basis(n: int) -> list:
        out = []
        for a in blocks[n]:
            bx, by = c1.basis(a), c2.basis(n - a)
            out.extend((x, y) for x in bx for y in by)
        return out

    out = CochainComplex(tuple(dims), tuple(mats), basis,
                         checked=c1.checked and c2.checked,
                         description=f"({c1.description}) ⊗ ({c2.description})")
    return out


# ---------------------------------------------------------------------------
# source resolution check

@dataclass(frozen=True)
class SourceResolutionReport:
    ok: bool
    sources: int
    oriented_dims: tuple[int, ...]
    resolution_dims: tuple[int, ...]
    oriented_cohomology: dict
    resolution_cohomology: dict
    first_mismatch: int | None = None
    message: str = ""


def _pad(xs: Sequence[int], n: int) -> tuple[int, ...]:
    return tuple(xs) + (0,) * (n - len(xs))


def verify_source_resolution_iso(g: OrientedGraph, spec: FunctorSpec, coeff: object = "q") -> SourceResolutionReport:
    """Compare the oriented-matching complex of ``g`` with ``C_mu(G_sr) ⊗ A^{(x)s}``."""
    s = sum(1 for d in analyze(g).indegree if d == 0)
    lhs = oriented_matching_cochain(g, spec)
    sr, _ = source_resolution(g)
    rhs = tensor(monotone_cochain(sr, "multipath", spec), concentrated(spec.algebra.dim ** s))
    n = max(len(lhs.dims), len(rhs.dims))
    ld, rd = _pad(lhs.dims, n), _pad(rhs.dims, n)
    hl, hr = cohomology(lhs, coeff).dims(), cohomology(rhs, coeff).dims()
    mismatch = None
    for deg in range(n):
        if ld[deg] != rd[deg] or hl.get(deg, 0) != hr.get(deg, 0):
            mismatch = deg
            break
    msg = "" if mismatch is None else (
        f"degree {mismatch}: dims {ld[mismatch]} vs {rd[mismatch]}, "
        f"cohomology {hl.get(mismatch, 0)} vs {hr.get(mismatch, 0)}")
    return SourceResolutionReport(mismatch is None, s, ld, rd, hl, hr, mismatch, msg)
