"""Exact linear algebra over Q, F_p and Z.

Matrices are stored sparsely as one ``{col: value}`` dict per row with Python
integers (or ``Fraction``) as entries.  Ranks and Smith forms are computed by
Schur-complement elimination that prefers unit pivots in short rows/columns;
on the chain complexes this package builds nearly every pivot is a unit, so
fill-in stays small.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels

__all__ = [
    "ExactMatrix",
    "HomologySummary",
    "CompositionError",
    "parse_coefficients",
    "rank",
    "smith_normal_form",
    "chain_homology",
    "cochain_cohomology",
]

DENSE_COLS = 64


class CompositionError(ValueError):
    """Two consecutive maps of a complex do not compose to zero."""

    def __init__(self, degree: int, message: str | None = None):
        self.degree = degree
        super().__init__(message or f"consecutive maps at degree {degree} do not compose to zero")


class ExactMatrix:
    """Sparse exact matrix, ``rows`` x ``cols``."""

    __slots__ = ("nrows", "ncols", "data")

    def __init__(self, nrows: int, ncols: int, data: list[dict[int, int]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.data = data if data is not None else [dict() for _ in range(nrows)]

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        data = [{c: v for c, v in enumerate(r) if v} for r in rows]
        return cls(len(rows), ncols, data)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Iterable[tuple[int, int, int]]) -> "ExactMatrix":
        m = cls(nrows, ncols)
        for r, c, v in entries:
            row = m.data[r]
            s = row.get(c, 0) + v
            if s:
                row[c] = s
            else:
                row.pop(c, None)
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "ExactMatrix":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, [{i: 1} for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def nnz(self) -> int:
        return sum(len(r) for r in self.data)

    def is_zero(self) -> bool:
        return all(not r for r in self.data)

    def is_integral(self) -> bool:
        return all(isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1)
                   for r in self.data for v in r.values())

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.data):
            for c, v in r.items():
                out[i][c] = v
        return out

    def transpose(self) -> "ExactMatrix":
        t = ExactMatrix(self.ncols, self.nrows)
        for i, r in enumerate(self.data):
            for c, v in r.items():
                t.data[c][i] = v
        return t

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = ExactMatrix(self.nrows, other.ncols)
        for i, r in enumerate(self.data):
            acc: dict[int, int] = {}
            for k, a in r.items():
                for c, b in other.data[k].items():
                    acc[c] = acc.get(c, 0) + a * b
            out.data[i] = {c: v for c, v in acc.items() if v}
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __repr__(self) -> str:
        return f"ExactMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


# ---------------------------------------------------------------------------
# coefficient parsing

def parse_coefficients(coeff: object) -> object:
    """Normalise a coefficient selector to ``"q"``, ``"z"`` or a prime ``int``.

    Accepts ``"q"``, ``"z"``, ``"fp:<p>"``, ``"p"``-like ints and the strings
    ``"rationals"``/``"integers"``.
    """
    if isinstance(coeff, int) and not isinstance(coeff, bool):
        p = coeff
    else:
        s = str(coeff).strip().lower()
        if s in {"q", "rationals", "qq"}:
            return "q"
        if s in {"z", "integers", "zz"}:
            return "z"
        if s.startswith("fp:"):
            s = s[3:]
        elif s.startswith("f") and s[1:].isdigit():
            s = s[1:]
        try:
            p = int(s)
        except ValueError:
            raise ValueError(f"unknown coefficients {coeff!r}; expected q, z or fp:<p>") from None
    if not _is_prime(p):
        raise ValueError(f"coefficient field F_{p}: {p} is not prime")
    return p


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


# ---------------------------------------------------------------------------
# sparse Schur-complement elimination

def _scale_to_integers(rows: list[dict]) -> list[dict[int, int]]:
    out = []
    for r in rows:
        if all(type(v) is int for v in r.values()):
            out.append(r)
        elif any(isinstance(v, Fraction) and v.denominator != 1 for v in r.values()):
            den = math.lcm(*(Fraction(v).denominator for v in r.values()))
            out.append({c: int(v * den) for c, v in r.items()})
        else:
            out.append({c: int(v) for c, v in r.items()})
    return out


class _Eliminator:
    """Shared pivoting state for the three arithmetic modes.

    ``mode`` is ``"q"`` (fraction-free, any pivot), ``"z"`` (unit pivots only,
    stops when none is left) or a prime ``p``.
    """

    def __init__(self, rows: list[dict[int, int]], mode: object):
        self.mode = mode
        if isinstance(mode, int):
            rows = [{c: v % mode for c, v in r.items() if v % mode} for r in rows]
        self.rows = {i: dict(r) for i, r in enumerate(rows) if r}
        cols: dict[int, set[int]] = {}
        for i, r in self.rows.items():
            for c in r:
                cols.setdefault(c, set()).add(i)
        self.cols = cols
        self.heap = [(len(s), c) for c, s in cols.items()]
        heapq.heapify(self.heap)
        self.rank = 0
        self.pivot_rows: list[int] = []

    def _pick(self):
        """Pivot in the sparsest live column; ``None`` when exhausted."""
        heap, cols, rows = self.heap, self.cols, self.rows
        modp = isinstance(self.mode, int)
        deferred = []
        choice = None
        while heap:
            n, c = heapq.heappop(heap)
            s = cols.get(c)
            if not s:
                continue
            if len(s) != n:
                heapq.heappush(heap, (len(s), c))
                continue
            best = None
            if n == 1:
                (i,) = s
                v = rows[i][c]
                if modp or v == 1 or v == -1:
                    best = i
            else:
                blen = 0
                for i in s:
                    v = rows[i][c]
                    if modp or v == 1 or v == -1:
                        ln = len(rows[i])
                        if best is None or ln < blen:
                            best, blen = i, ln
            if best is not None:
                choice = (best, c)
                deferred.append((n, c))
                break
            if self.mode == "q":
                best = min(s, key=lambda i: (abs(rows[i][c]), len(rows[i])))
                choice = (best, c)
                deferred.append((n, c))
                break
            deferred.append((n, c))  # "z": no unit here
        for item in deferred:
            heapq.heappush(heap, item)
        return choice

    def _eliminate(self, pr: int, pc: int) -> None:
        rows, cols, mode = self.rows, self.cols, self.mode
        prow = rows.pop(pr)
        for c in prow:
            cols[c].discard(pr)
        a = prow[pc]
        targets = list(cols[pc])
        for i in targets:
            row = rows[i]
            b = row[pc]
            if isinstance(mode, int):
                f = (b * pow(a, mode - 2, mode)) % mode
                for c, v in prow.items():
                    nv = (row.get(c, 0) - f * v) % mode
                    self._set(i, row, c, nv)
            elif a == 1 or a == -1:
                f = b * a
                for c, v in prow.items():
                    nv = row.get(c, 0) - f * v
                    self._set(i, row, c, nv)
            else:
                # fraction-free update; only rank over Q reaches this branch
                for c in list(row):
                    row[c] = row[c] * a
                for c, v in prow.items():
                    nv = row.get(c, 0) - b * v
                    self._set(i, row, c, nv)
                g = 0
                for v in row.values():
                    g = math.gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    for c in row:
                        row[c] //= g
            if not row:
                del rows[i]
        for c in prow:
            s = cols.get(c)
            if s is not None:
                if not s:
                    del cols[c]
                else:
                    heapq.heappush(self.heap, (len(s), c))
        cols.pop(pc, None)
        self.rank += 1
        self.pivot_rows.append(pr)

    def _set(self, i: int, row: dict, c: int, v: int) -> None:
        if v:
            if c not in row:
                self.cols.setdefault(c, set()).add(i)
            row[c] = v
        elif c in row:
            del row[c]
            self.cols[c].discard(i)

    def run(self) -> int:
        while self.rows:
            choice = self._pick()
            if choice is None:
                break
            self._eliminate(*choice)
        return self.rank

    def residual(self) -> list[list[int]]:
        """Dense copy of what is left (after a ``"z"`` run)."""
        live_cols = sorted(c for c, s in self.cols.items() if s)
        index = {c: k for k, c in enumerate(live_cols)}
        out = []
        for r in self.rows.values():
            if r:
                dense = [0] * len(live_cols)
                for c, v in r.items():
                    dense[index[c]] = v
                out.append(dense)
        return out


def _rank_with_pivots(m: ExactMatrix, mode: object) -> tuple[int, list[int]]:
    """Rank and the rows used as pivots (empty when the dense kernel ran)."""
    if m.nrows == 0 or m.ncols == 0:
        return 0, []
    rows = _scale_to_integers(m.data)
    if isinstance(mode, int) and mode < 2 ** 31 and m.ncols < DENSE_COLS and m.nrows * m.ncols <= 1 << 16:
        dense = np.zeros((m.nrows, m.ncols), dtype=np.int64)
        for i, r in enumerate(rows):
            for c, v in r.items():
                dense[i, c] = v % mode
        return _kernels.rank_mod_p_dense(dense, mode), []
    el = _Eliminator(rows, mode)
    return el.run(), el.pivot_rows


def rank(m: ExactMatrix, field: object = "q") -> int:
    """Exact rank over the rationals (``"q"``) or over ``F_p`` (prime ``p``)."""
    mode = parse_coefficients(field)
    if mode == "z":
        mode = "q"
    return _rank_with_pivots(m, mode)[0]


# ---------------------------------------------------------------------------
# Smith normal form

def _dense_snf(a: list[list[int]]) -> list[int]:
    """Diagonal of the Smith form of a small dense integer matrix."""
    a = [list(r) for r in a]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    diag = []
    t = 0
    while t < min(nr, nc):
        # smallest-magnitude nonzero pivot in the trailing block
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, nc):
                            ri[j] -= q * rt[j]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for r in a[t:]:
                            r[j] -= q * r[t]
                    if a[t][j]:
                        dirty = True
            if not dirty:
                # divisibility of the rest by the pivot
                bad = None
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rb, rt = a[bad], a[t]
                for j in range(t, nc):
                    rt[j] += rb[j]
                continue
            # move the smallest remaining entry of row/column t onto the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, nr):
                v = a[i][t]
                if v and abs(v) < best[0]:
                    best = (abs(v), i, t)
            for j in range(t + 1, nc):
                v = a[t][j]
                if v and abs(v) < best[0]:
                    best = (abs(v), t, j)
            _, i, j = best
            if i != t:
                a[t], a[i] = a[i], a[t]
            if j != t:
                for r in a:
                    r[t], r[j] = r[j], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def _normalize_divisibility(d: list[int]) -> list[int]:
    d = sorted(x for x in d if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = math.gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
        d.sort()
    return d


def _snf_with_pivots(m: ExactMatrix) -> tuple[list[int], list[int]]:
    if not m.is_integral():
        raise ValueError("Smith normal form needs integer entries")
    rows = [{c: int(v) for c, v in r.items()} for r in m.data]
    el = _Eliminator(rows, "z")
    units = el.run()
    rest = el.residual()
    return [1] * units + _normalize_divisibility(_dense_snf(rest) if rest else []), el.pivot_rows


def smith_normal_form(m: ExactMatrix) -> list[int]:
    """Invariant factors ``d_1 | d_2 | ... | d_r`` (all positive, ``r`` = rank)."""
    return _snf_with_pivots(m)[0]


def _drop_columns(m: ExactMatrix, cols: Iterable[int]) -> ExactMatrix:
    drop = set(cols)
    if not drop:
        return m
    return ExactMatrix(m.nrows, m.ncols, [{c: v for c, v in r.items() if c not in drop} for r in m.data])


# ---------------------------------------------------------------------------
# homology

@dataclass(frozen=True)
class HomologySummary:
    """Per-degree Betti numbers (and integral torsion) of a complex."""

    coefficients: str
    betti: dict[int, int]
    torsion: dict[int, tuple[int, ...]] = field(default_factory=dict)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.betti)

    def dims(self) -> dict[int, int]:
        return {d: b for d, b in sorted(self.betti.items()) if b}

    def nonzero(self) -> dict[int, int]:
        return self.dims()

    def total(self) -> int:
        return sum(self.betti.values())

    def torsion_primes(self) -> set[int]:
        out = set()
        for factors in self.torsion.values():
            for f in factors:
                k = 2
                while f > 1:
                    while f % k == 0:
                        out.add(k)
                        f //= k
                    k += 1
        return out

    def as_dict(self) -> dict:
        return {
            "coefficients": self.coefficients,
            "betti": {str(d): b for d, b in sorted(self.betti.items())},
            "torsion": {str(d): list(t) for d, t in sorted(self.torsion.items()) if t},
        }


def _coeff_name(mode: object) -> str:
    return mode if isinstance(mode, str) else f"fp:{mode}"


def _homology(dims: Mapping[int, int], maps: Mapping[int, ExactMatrix], step: int,
              coeff: object, check: bool = True) -> HomologySummary:
    """``maps[n]`` leaves degree ``n`` for degree ``n + step`` (shape dim[n+step] x dim[n])."""
    mode = parse_coefficients(coeff)
    for n, mat in maps.items():
        if mat.shape != (dims.get(n + step, 0), dims.get(n, 0)):
            raise ValueError(f"map out of degree {n} has shape {mat.shape}, "
                             f"expected {(dims.get(n + step, 0), dims.get(n, 0))}")
    if check:
        for n, mat in maps.items():
            nxt = maps.get(n + step)
            if nxt is not None and not (nxt @ mat).is_zero():
                raise CompositionError(n + step)
    # Walk the maps along the complex.  A pivot (row b, column a) of one map
    # cancels the pair a, b (Gaussian elimination of the complex), so column b
    # of the following map can be dropped without changing its rank or the
    # homology; over Z only unit pivots are cancelled.
    ranks: dict[int, int] = {}
    torsion: dict[int, tuple[int, ...]] = {}
    cancelled: dict[int, list[int]] = {}
    for n in sorted(maps, key=lambda k: k * step):
        mat = _drop_columns(maps[n], cancelled.get(n, ()))
        if mode == "z":
            inv, piv = _snf_with_pivots(mat)
            ranks[n] = len(inv)
            tors = tuple(f for f in inv if f > 1)
            if tors:
                torsion[n + step] = tors
        else:
            ranks[n], piv = _rank_with_pivots(mat, mode if mode != "z" else "q")
        cancelled[n + step] = piv
    betti = {}
    for n, d in dims.items():
        betti[n] = d - ranks.get(n, 0) - ranks.get(n - step, 0)
    return HomologySummary(_coeff_name(mode), dict(sorted(betti.items())), dict(sorted(torsion.items())))


def chain_homology(boundaries: Sequence[ExactMatrix], coeff: object = "q", *,
                   dims: Sequence[int] | None = None, start: int = 0, check: bool = True) -> HomologySummary:
    """Homology of ``C_start <- C_{start+1} <- ...``.

    ``boundaries[k]`` is the map from degree ``start+k+1`` to ``start+k``.
    Over ``"z"`` the torsion of degree ``n`` is read off the Smith form of the
    boundary landing in degree ``n``.
    """
    if dims is None:
        if not boundaries:
            raise ValueError("need dims when there are no boundary maps")
        dims = [boundaries[0].nrows] + [b.ncols for b in boundaries]
    dmap = {start + k: d for k, d in enumerate(dims)}
    maps = {start + k + 1: b for k, b in enumerate(boundaries)}
    return _homology(dmap, maps, -1, coeff, check)


def cochain_cohomology(differentials: Sequence[ExactMatrix], dims: Sequence[int], coeff: object = "q", *,
                       start: int = 0, check: bool = True) -> HomologySummary:
    """Cohomology of ``C^start -> C^{start+1} -> ...``; ``differentials[k]`` leaves degree ``start+k``."""
    dmap = {start + k: d for k, d in enumerate(dims)}
    maps = {start + k: b for k, b in enumerate(differentials)}
    return _homology(dmap, maps, +1, coeff, check)
